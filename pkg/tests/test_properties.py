import io

from hypothesis import given, settings
from hypothesis import strategies as st

from dagpart.graph import PartitioningSet, WeightedDag, is_valid_partitioning_set, reaches_exactly_one_sink
from dagpart.heuristic import heuristic_partition
from dagpart.io import read_instance, write_instance
from dagpart.reduction import lift_witness, reduce
from dagpart.search import solve_minimize


@st.composite
def dags(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=16)) if pairs else []
    # orient high -> low so arcs point toward older vertices, then relabel
    perm = draw(st.permutations(range(n)))
    arcs = [(perm[v], perm[u]) for u, v in chosen]
    ws = draw(st.lists(st.integers(1, 6), min_size=len(arcs), max_size=len(arcs)))
    return WeightedDag(n, arcs, ws)


@settings(max_examples=150, deadline=None)
@given(dags(), st.data())
def test_validity_views_agree(g, data):
    subset = data.draw(st.sets(st.integers(0, max(g.m - 1, 0)), max_size=g.m)) if g.m else set()
    s = PartitioningSet.of(g, subset)
    assert is_valid_partitioning_set(g, s) == reaches_exactly_one_sink(g, s)


@settings(max_examples=100, deadline=None)
@given(dags())
def test_instance_format_round_trip(g):
    assert read_instance(io.StringIO(write_instance(g))) == g


@settings(max_examples=80, deadline=None)
@given(dags())
def test_reduction_preserves_optimum_and_lifts(g):
    r, log = reduce(g)
    opt = solve_minimize(g, "none").witness.total_weight
    sub = solve_minimize(r, "none").witness
    assert sub.total_weight == opt
    lifted = lift_witness(log, sub)
    assert lifted.total_weight == opt and is_valid_partitioning_set(g, lifted)
    assert heuristic_partition(g).total_weight >= opt
