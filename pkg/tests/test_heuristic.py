import random

from dagpart.generators import gen_pref_attach
from dagpart.graph import WeightedDag, is_valid_partitioning_set
from dagpart.heuristic import heuristic_labels, heuristic_partition
from dagpart.oracle import brute_force_min
from dagpart.search import solve_minimize
from instances import random_dags, random_tree_dag


def test_single_sink_deletes_nothing():
    g = WeightedDag(4, [(1, 0), (2, 1), (3, 1), (3, 0)])
    assert len(heuristic_partition(g)) == 0


def test_heaviest_group_wins():
    # s1=0, s2=1, c=2 -> s1, a=3 and b=4 -> s2, v=5 -> a, b, c
    g = WeightedDag(6, [(2, 0), (3, 1), (4, 1), (5, 3), (5, 4), (5, 2)], [1, 1, 1, 2, 2, 5])
    s = heuristic_partition(g)
    assert sorted(s.as_pairs(g)) == [(5, 3), (5, 4)]
    assert s.total_weight == 4
    assert heuristic_labels(g)[0][5] == 0


def test_ties_go_to_smallest_sink():
    g = WeightedDag(3, [(2, 1), (2, 0)], [2, 2])
    labels, deleted = heuristic_labels(g)
    assert labels[2] == 0
    assert [g.arcs[a] for a in deleted] == [(2, 1)]


def test_valid_and_never_below_optimum():
    for g in random_dags(31, 300):
        s = heuristic_partition(g)
        assert is_valid_partitioning_set(g, s)
        assert s.total_weight >= brute_force_min(g)[0]
        r = heuristic_partition(g, pre_reduce=True)
        assert is_valid_partitioning_set(g, r)


def test_optimal_on_trees():
    rng = random.Random(32)
    for _ in range(100):
        g = random_tree_dag(rng, max_n=40)
        assert heuristic_partition(g).total_weight == solve_minimize(g).witness.total_weight


def test_deterministic():
    g = gen_pref_attach(3, 300, 3, seed=5)
    assert heuristic_partition(g) == heuristic_partition(g)
