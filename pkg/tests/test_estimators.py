import networkx as nx
import pytest
from sklearn.base import clone

from dagpart import (
    BruteForcePartitioner,
    DataReducer,
    ExactPartitioner,
    HeuristicPartitioner,
    PartitioningSet,
    TreewidthPartitioner,
    WeightedDag,
    component_labels,
    is_valid_partitioning_set,
)
from dagpart.validation import check_budget, check_dag
from instances import EX_S1, EX_S2, example_graph, random_dags

ALL = [ExactPartitioner, HeuristicPartitioner, TreewidthPartitioner, BruteForcePartitioner]


@pytest.mark.parametrize("cls", ALL)
def test_clone_and_params(cls):
    est = cls()
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert twin is not est


@pytest.mark.parametrize("cls", ALL)
def test_fit_running_example(cls):
    g = example_graph()
    est = cls().fit(g)
    assert est.status_ == "yes"
    assert est.weight_ == 1
    assert is_valid_partitioning_set(g, est.partitioning_set_)
    assert set(est.labels_) == {EX_S1, EX_S2}
    assert est.n_vertices_ == g.n


def test_fit_predict_matches_labels():
    est = ExactPartitioner()
    labels = est.fit_predict(example_graph())
    assert labels == est.labels_


def test_decision_budget():
    est = ExactPartitioner(budget=0).fit(example_graph())
    assert est.status_ == "no" and est.labels_ is None
    with pytest.raises(RuntimeError):
        ExactPartitioner(budget=0).fit_predict(example_graph())
    assert ExactPartitioner(budget=1, reduction="none").fit(example_graph()).status_ == "yes"


def test_limit_status():
    from dagpart.generators import GenSpec, gen_embedded

    g, _ = gen_embedded(GenSpec(4, 40, 3, 1, 6, seed=1))
    est = ExactPartitioner(budget=6, node_limit=1, reduction="none").fit(g)
    assert est.status_ == "limit" and est.partitioning_set_ is None


def test_bad_parameters():
    with pytest.raises(ValueError):
        ExactPartitioner(reduction="sometimes").fit(example_graph())
    with pytest.raises(ValueError):
        ExactPartitioner(budget=-2).fit(example_graph())
    with pytest.raises(TypeError):
        ExactPartitioner(budget=1.5).fit(example_graph())


class TestInputs:
    def test_tuples(self):
        g = check_dag([(0, 1, 3), (0, 2)])
        assert g.n == 3 and g.weights == (3, 1)
        assert check_dag([(0, 1)], n_vertices=4).n == 4

    def test_networkx(self):
        d = nx.DiGraph()
        d.add_edge(0, 1, weight=2)
        d.add_edge(0, 2)
        g = check_dag(d)
        assert g.arcs == [(0, 1), (0, 2)] and g.weights == (2, 1)
        assert HeuristicPartitioner().fit(d).weight_ == 1

    def test_rejections(self):
        with pytest.raises(TypeError):
            check_dag(nx.Graph([(0, 1)]))
        with pytest.raises(ValueError):
            check_dag(nx.DiGraph([("a", "b")]))
        with pytest.raises(ValueError):
            check_dag([(0, 1, 2, 3)])
        with pytest.raises(TypeError):
            check_dag(42)
        with pytest.raises(ValueError):
            check_dag(example_graph(), n_vertices=3)

    def test_budget(self):
        assert check_budget(None) is None and check_budget(3) == 3
        with pytest.raises(TypeError):
            check_budget(True)


def test_treewidth_uses_supplied_decomposition():
    from dagpart.treewidth import TreeDecomposition

    g = WeightedDag(3, [(0, 1), (0, 2)])
    td = TreeDecomposition({0: {0, 1}, 1: {0, 2}}, [(0, 1)])
    est = TreewidthPartitioner(decomposition=td).fit(g)
    assert est.weight_ == 1 and est.width_ == 1


def test_estimators_agree_on_random_graphs():
    for g in random_dags(81, 40):
        w = {cls.__name__: cls().fit(g).weight_ for cls in (ExactPartitioner, BruteForcePartitioner, TreewidthPartitioner)}
        assert len(set(w.values())) == 1, w
        assert HeuristicPartitioner().fit(g).weight_ >= w["ExactPartitioner"]


class TestReducer:
    def test_transform_and_lift(self):
        g = example_graph()
        red = DataReducer().fit(g)
        r = red.transform(g)
        assert (r.n, r.m) == (4, 3)
        s = ExactPartitioner().fit(r).partitioning_set_
        lifted = red.lift(s)
        assert lifted.total_weight == 1 and is_valid_partitioning_set(g, lifted)

    def test_fit_transform(self):
        assert DataReducer().fit_transform(example_graph()).m == 3

    def test_transform_other_graph(self):
        red = DataReducer().fit(example_graph())
        assert red.transform([(1, 0), (2, 1)]).n == 1

    def test_unfitted(self):
        with pytest.raises(RuntimeError):
            DataReducer().transform(example_graph())


def test_component_labels_rejects_invalid_set():
    with pytest.raises(ValueError):
        component_labels(example_graph(), PartitioningSet.empty())
