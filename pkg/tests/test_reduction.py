import time

import pytest

from dagpart.generators import GenSpec, gen_embedded
from dagpart.graph import PartitioningSet, WeightedDag, is_valid_partitioning_set, sinks
from dagpart.oracle import brute_force_min
from dagpart.reduction import (
    MULTIPLE,
    apply_rule1,
    apply_rule2,
    compute_sink_labels,
    lift_witness,
    reduce,
)
from instances import (
    EX_A, EX_B, EX_E, EX_F, EX_S1, EX_S2, EX_V, EX_W,
    example_graph, random_dags,
)


def _weighted_arcs(g):
    return sorted(zip(g.tails, g.heads, g.weights))


def rule1_arcs_left(g):
    lab = compute_sink_labels(g).labels
    return [
        (u, v) for u, v in g.arcs
        if lab[u] == MULTIPLE and lab[v] != MULTIPLE and lab[v] != v
    ]


def rule2_vertices_left(g):
    lab = compute_sink_labels(g).labels
    return [v for v in range(g.n) if lab[v] != MULTIPLE and lab[v] != v]


class TestLabels:
    def test_single_sink(self):
        g = WeightedDag(4, [(1, 0), (2, 1), (3, 0), (3, 2)])
        assert compute_sink_labels(g).labels == (0, 0, 0, 0)

    def test_running_example(self):
        lab = compute_sink_labels(example_graph())
        assert lab.unique_sink(EX_W) == EX_S1
        assert lab.is_multiple(EX_V)
        assert lab.unique_sink(EX_F) == EX_S2

    def test_split_neighbours_give_multiple(self):
        lab = compute_sink_labels(WeightedDag(5, [(2, 0), (3, 1), (4, 2), (4, 3)]))
        assert lab[4] == MULTIPLE


class TestRule1:
    def test_running_example(self):
        g1, log = apply_rule1(example_graph())
        assert g1.n == 8
        assert _weighted_arcs(g1) == sorted([
            (EX_A, EX_S1, 1), (EX_B, EX_S1, 1), (EX_W, EX_B, 1), (EX_W, EX_A, 1),
            (EX_E, EX_V, 1), (EX_F, EX_S2, 1), (EX_V, EX_S1, 1), (EX_V, EX_S2, 2),
        ])
        assert len(log.merges) == 2
        assert log.replay() == g1

    def test_single_sink_unchanged(self):
        g = WeightedDag(3, [(1, 0), (2, 1)])
        assert apply_rule1(g)[0].same_structure(g)

    def test_only_sink_neighbours_unchanged(self):
        g = WeightedDag(4, [(2, 0), (2, 1), (3, 0), (3, 1)])
        assert apply_rule1(g)[0].same_structure(g)

    def test_label_size_mismatch(self):
        with pytest.raises(ValueError):
            apply_rule1(example_graph(), compute_sink_labels(WeightedDag(2, [])))


class TestRule2:
    def test_after_rule1_keeps_four_vertices(self):
        g1, _ = apply_rule1(example_graph())
        g2, log = apply_rule2(g1)
        assert sorted(log.deleted_vertices) == [EX_A, EX_B, EX_W, EX_F]
        assert g2.n == 4 and g2.m == 3

    def test_single_sink_collapses(self):
        g = WeightedDag(5, [(1, 0), (2, 1), (3, 2), (4, 0)])
        g2, _ = apply_rule2(g)
        assert (g2.n, g2.m) == (1, 0)

    def test_all_multiple_unchanged(self):
        g = WeightedDag(4, [(2, 0), (2, 1), (3, 2), (3, 1)])
        assert apply_rule2(g)[0].same_structure(g)


class TestReduce:
    def test_running_example(self):
        r, log = reduce(example_graph())
        vm = log.vertex_map
        assert _weighted_arcs(r) == sorted([
            (vm[EX_V], vm[EX_S1], 1), (vm[EX_V], vm[EX_S2], 2), (vm[EX_E], vm[EX_V], 1),
        ])
        assert log.replay() == r
        assert brute_force_min(r)[0] == brute_force_min(example_graph())[0] == 1

    def test_fixpoint(self):
        r, _ = reduce(example_graph())
        assert reduce(r)[0].same_structure(r)

    def test_merges_touch_each_arc_once(self):
        for g in random_dags(11, 200):
            _, log = reduce(g)
            deleted = [ev.deleted_arc for ev in log.merges]
            assert len(deleted) == len(set(deleted))

    def test_random_properties(self):
        for g in random_dags(12, 200):
            r, log = reduce(g)
            assert log.replay() == r
            assert reduce(r)[0].same_structure(r)
            assert not rule1_arcs_left(r)
            assert not rule2_vertices_left(r)
            assert len(sinks(r)) == len(sinks(g))
            opt, wit = brute_force_min(r)
            assert opt == brute_force_min(g)[0]
            lifted = lift_witness(log, wit)
            assert lifted.total_weight == opt
            assert is_valid_partitioning_set(g, lifted)

    def test_large_instance_is_fast(self):
        g, _ = gen_embedded(GenSpec(10, 6000, 20, 1, 20, seed=2))
        assert g.m >= 10**6
        t0 = time.perf_counter()
        r, _ = reduce(g)
        assert time.perf_counter() - t0 < 10
        assert r.m < g.m // 100


class TestLift:
    def test_empty_log_is_identity(self):
        g = WeightedDag(3, [(1, 0), (2, 0)])
        r, log = reduce(g)
        assert lift_witness(log, PartitioningSet.empty()) == PartitioningSet.empty()

    def test_running_example(self):
        g = example_graph()
        r, log = reduce(g)
        vm = log.vertex_map
        heavy = PartitioningSet.of(r, [r.arc_id(vm[EX_V], vm[EX_S2])])
        assert heavy.total_weight == 2
        lifted = lift_witness(log, heavy)
        assert sorted(lifted.as_pairs(g)) == [(EX_V, EX_S2), (EX_V, EX_F)]
        assert lifted.total_weight == 2
        assert is_valid_partitioning_set(g, lifted)

    def test_unknown_arc(self):
        _, log = reduce(example_graph())
        with pytest.raises(ValueError):
            lift_witness(log, [99])
