import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import grid, random_caps, random_pseudoflow, random_simple_path
from planarflow.errors import ContractError, StructuralError
from planarflow.fix_conservation import (ImplicitFlow, big_m, check_fix_contract,
                                         fix_conservation_on_path, fix_conservation_reference)
from planarflow.flow_core import inflow_vector
from planarflow.oracle import generic_reachable
from planarflow.planar_core import PlanarGraph

METHODS = ("monge", "dense", "vector")


def both(g, P, c, f0, **kw):
    ref = fix_conservation_reference(g, P, c, f0, **kw)
    outs = [fix_conservation_on_path(g, P, c, f0, method=m, **kw) for m in METHODS]
    return ref, outs


def assert_equivalent(g, P, c, f0, ref, outs):
    nodes = {g.tail(P[0])} | {g.head[d] for d in P}
    want = inflow_vector(g, ref)
    for out in outs:
        check_fix_contract(g, c, f0, out, P)
        got = inflow_vector(g, out)
        assert [got[v] for v in sorted(nodes)] == [want[v] for v in sorted(nodes)]
        # flows differ by a circulation
        assert got == want


def test_conserving_start_keeps_inflows():
    g = grid(4, 4)
    c = random_caps(random.Random(1), g)
    f0 = [0] * g.dart_count
    P = [d for d in g.rotation(5) if g.head[d] == 6] + [d for d in g.rotation(6) if g.head[d] == 7]
    ref, outs = both(g, P, c, f0)
    assert inflow_vector(g, ref) == [0] * g.node_count
    assert_equivalent(g, P, c, f0, ref, outs)


def triangle_instance():
    # a=0 -> b=1 (cap 10), b -> z=2 (cap 4), z -> a (cap 4); f0 uses b->z->a
    g = PlanarGraph.from_coordinates([(0, 0), (2, 0), (1, 1)], [(0, 1), (1, 2), (2, 0)])
    c = [10, 0, 4, 0, 4, 0]
    f0 = [0, 0, 4, -4, 4, -4]
    return g, c, f0


def test_single_dart_moves_excess():
    g, c, f0 = triangle_instance()
    assert inflow_vector(g, f0) == [4, -4, 0]
    ref, outs = both(g, [0], c, f0)
    assert inflow_vector(g, ref) == [0, 0, 0]
    assert_equivalent(g, [0], c, f0, ref, outs)


def test_limited_cut_moves_two_units():
    # s=0 -> p1=1 -> p2=2; five units sit at p1 but p1 -> p2 holds two
    g = PlanarGraph.from_coordinates([(0, 0), (1, 0), (2, 0)], [(0, 1), (1, 2)])
    c = [5, 0, 2, 0]
    f0 = [5, -5, 0, 0]
    P = [2]
    ref, outs = both(g, P, c, f0)
    inf = inflow_vector(g, ref)
    assert inf[1:] == [3, 2]
    assert_equivalent(g, P, c, f0, ref, outs)


def test_one_dart_path_matches_reference():
    rng = random.Random(4)
    g = grid(3, 3)
    c = random_caps(rng, g)
    f0 = random_pseudoflow(rng, g, c)
    P = [g.rotation(4)[0]]
    ref, outs = both(g, P, c, f0)
    assert_equivalent(g, P, c, f0, ref, outs)


def test_rejects_bad_input():
    g, c, f0 = triangle_instance()
    with pytest.raises(ContractError):
        fix_conservation_on_path(g, [0], c, [11, -11, 0, 0, 0, 0])
    with pytest.raises(StructuralError):
        fix_conservation_reference(g, [], c, f0)
    with pytest.raises(StructuralError):
        fix_conservation_on_path(g, [0, 4], c, f0)


def single_arc_state(cap, f, v):
    g = PlanarGraph.from_coordinates([(0, 0), (1, 0)], [(0, 1)])
    s = ImplicitFlow(g, [0], list(cap), list(f), [0], [0], list(v))
    s.tail_x = {0: 0, 1: 0}
    s.head_x = {0: 0, 1: 0}
    return s


def test_saturate_pushes_min_of_residual_and_excess():
    s = single_arc_state([3, 0], [0, 0], [5, 0])
    assert s.saturate(0, 0) == 3
    assert s.v == [2, 3] and s.f == [3, -3]


def test_saturate_no_ops():
    s = single_arc_state([3, 0], [3, -3], [5, 0])
    assert s.saturate(0, 0) == 0 and s.v == [5, 0]
    s = single_arc_state([3, 0], [0, 0], [0, 0])
    assert s.saturate(0, 0) == 0 and s.f == [0, 0]


def test_capacity_restore_clamps():
    M = 100
    s = single_arc_state([4 + M, M], [9, -9], [-9, 9])
    s.capacity_restore(0, M)
    assert s.cap == [4, 0]
    assert s.f == [4, -4] and s.v == [-4, 4]


def test_capacity_restore_keeps_small_flow():
    M = 100
    s = single_arc_state([4 + M, M], [2, -2], [-2, 2])
    s.capacity_restore(0, M)
    assert s.f == [2, -2] and s.v == [-2, 2]


def test_big_m_exceeds_total_capacity():
    g, c, _ = triangle_instance()
    assert big_m(g, c) == sum(c) + 1


def processed_lemma(g, P, i, flow, cap):
    """Independent scan of the per-iteration reachability claims."""
    nodes = [g.tail(P[0])] + [g.head[d] for d in P]
    inf = inflow_vector(g, flow)
    rev_cap = [cap[d ^ 1] for d in range(len(cap))]
    rev_flow = [-x for x in flow]
    for j in range(i + 1):
        later = nodes[j + 1:]
        p = nodes[j]
        if inf[p] > 0:
            seen = generic_reachable(g.node_count, g.head, cap, flow, [p])
            assert not any(seen[q] for q in later)
        elif inf[p] < 0:
            seen = generic_reachable(g.node_count, g.head, rev_cap, rev_flow, [p])
            assert not any(seen[q] for q in later)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_efficient_matches_reference(seed):
    rng = random.Random(seed)
    g = grid(rng.randint(2, 7), rng.randint(2, 7))
    c = random_caps(rng, g)
    f0 = random_pseudoflow(rng, g, c)
    P = random_simple_path(rng, g, rng.randint(1, 14))
    steps = []
    ref = fix_conservation_reference(
        g, P, c, f0, checkpoint=lambda i, fl, cap: steps.append((i, fl, cap)))
    assert [s[0] for s in steps] == list(range(len(P)))
    for i, fl, cap in steps:
        processed_lemma(g, P, i, fl, cap)
    outs = [fix_conservation_on_path(g, P, c, f0, method=m) for m in METHODS]
    check_fix_contract(g, c, f0, ref, P)
    assert_equivalent(g, P, c, f0, ref, outs)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_inflow_offset(seed):
    # fixing base + f0 with residual capacities c - base
    rng = random.Random(seed)
    g = grid(rng.randint(2, 5), rng.randint(2, 5))
    c = random_caps(rng, g)
    base = random_pseudoflow(rng, g, c)
    res = [c[d] - base[d] for d in range(g.dart_count)]
    P = random_simple_path(rng, g, rng.randint(1, 8))
    offset = inflow_vector(g, base)
    zero = [0] * g.dart_count
    ref = fix_conservation_reference(g, P, res, zero, inflow_offset=offset)
    out = fix_conservation_on_path(g, P, res, zero, inflow_offset=offset)
    assert inflow_vector(g, ref) == inflow_vector(g, out)
    total = [a + b for a, b in zip(base, out)]
    check_fix_contract(g, c, base, total, P)


def test_trace_records_every_iteration():
    rng = random.Random(9)
    g = grid(5, 5)
    c = random_caps(rng, g)
    f0 = random_pseudoflow(rng, g, c)
    P = random_simple_path(rng, g, 6)
    trace = []
    out = fix_conservation_on_path(g, P, c, f0, trace=trace)
    assert len(trace) == len(P)
    nodes = [g.tail(P[0])] + [g.head[d] for d in P]
    inf = inflow_vector(g, out)
    assert trace[-1] == [inf[v] for v in nodes]
