import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import grid, random_caps, random_pseudoflow
from planarflow.errors import ContractError
from planarflow.flow_core import (add, cancel_flow_cycles, certify, check_pseudoflow,
                                  finalize_pseudoflow, flow_value, inflow, inflow_vector,
                                  is_acyclic, negate, push_excess_to_terminals, reaches,
                                  residual_coreachable, residual_reachable,
                                  reversed_capacities, zero_flow)
from planarflow.oracle import oracle_maxflow
from planarflow.planar_core import PlanarGraph

seeds = st.integers(0, 10**6)


def path_graph(k: int) -> PlanarGraph:
    return PlanarGraph.from_coordinates([(i, 0) for i in range(k)],
                                        [(i, i + 1) for i in range(k - 1)])


def triangle() -> PlanarGraph:
    return PlanarGraph.from_coordinates([(0, 0), (1, 0), (0, 1)], [(0, 1), (1, 2), (2, 0)])


def residual_walk(rng, g, c, f, start, closed=False):
    """A simple residual path from ``start``; with ``closed`` a residual
    cycle through ``start`` (or [] if the walk fails)."""
    path, seen, u = [], {start}, start
    for _ in range(g.node_count):
        opts = [d for d in g.rotation(u) if c[d] - f[d] > 0]
        if closed:
            back = [d for d in opts if g.head[d] == start and path]
            if back:
                return path + [back[0]]
        opts = [d for d in opts if g.head[d] not in seen]
        if not opts or (not closed and path and rng.random() < 0.3):
            break
        d = rng.choice(opts)
        path.append(d)
        u = g.head[d]
        seen.add(u)
    return [] if closed else path


def push_path(rng, c, f, path):
    room = min(c[d] - f[d] for d in path)
    x = rng.randint(1, room)
    for d in path:
        f[d] += x
        f[d ^ 1] -= x


def test_inflow_single_arc():
    g = path_graph(2)
    f = [3, -3]
    assert inflow(g, f, 1) == 3 and inflow(g, f, 0) == -3
    assert inflow_vector(g, zero_flow(g)) == [0, 0]


@given(seeds)
def test_inflows_telescope(seed):
    rng = random.Random(seed)
    g = grid(rng.randint(2, 5), rng.randint(2, 5))
    c = random_caps(rng, g)
    f = random_pseudoflow(rng, g, c)
    assert sum(inflow_vector(g, f)) == 0


@given(seeds)
def test_add_identities(seed):
    rng = random.Random(seed)
    g = grid(3, 3)
    c = random_caps(rng, g)
    f = random_pseudoflow(rng, g, c)
    assert add(f, zero_flow(g)) == f
    assert add(f, negate(f)) == zero_flow(g)


def test_add_of_two_oracle_flows():
    g = grid(4, 4)
    rng = random.Random(5)
    c = random_caps(rng, g)
    f1 = oracle_maxflow(g, c, [0], [15]).flow
    f2 = oracle_maxflow(g, c, [3], [12]).flow
    total = inflow_vector(g, add(f1, f2))
    assert total == [a + b for a, b in zip(inflow_vector(g, f1), inflow_vector(g, f2))]


def test_residual_examples():
    g = path_graph(2)
    assert not residual_reachable(g, [2, 0], [2, -2], [0])[1]
    h = grid(3, 3)
    assert all(residual_reachable(h, [1] * h.dart_count, zero_flow(h), [4]))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_oracle_flow_separates(seed):
    rng = random.Random(seed)
    g = grid(rng.randint(2, 5), rng.randint(2, 5))
    c = random_caps(rng, g)
    S, T = [0], [g.node_count - 1]
    sol = oracle_maxflow(g, c, S, T)
    assert not reaches(g, c, sol.flow, S, T)
    co = residual_coreachable(g, c, sol.flow, T)
    assert not any(co[s] for s in S)


def test_cancel_triangle_circulation():
    g = triangle()
    f = [2, -2, 2, -2, 2, -2]
    assert cancel_flow_cycles(g, f) == [0] * 6


def test_cancel_keeps_acyclic_flow():
    g = path_graph(4)
    f = [1, -1, 1, -1, 1, -1]
    assert cancel_flow_cycles(g, f) == f


def test_cancel_recovers_path_flow():
    # 0 -> 1 -> 2 plus the cycle 1 -> 2 -> 3 -> 1 around a square
    g = PlanarGraph.from_coordinates([(0, 0), (1, 0), (2, 0), (1, 1)],
                                     [(0, 1), (1, 2), (2, 3), (3, 1)])
    path = [2, -2, 2, -2, 0, 0, 0, 0]
    f = add(path, [0, 0, 3, -3, 3, -3, 3, -3])
    out = cancel_flow_cycles(g, f)
    assert out == path


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_cancel_is_acyclic_and_keeps_inflows(seed):
    rng = random.Random(seed)
    g = grid(rng.randint(2, 6), rng.randint(2, 6))
    c = random_caps(rng, g)
    f = random_pseudoflow(rng, g, c)
    out = cancel_flow_cycles(g, f)
    assert is_acyclic(g, out)
    assert inflow_vector(g, out) == inflow_vector(g, f)
    for d in range(g.dart_count):
        if out[d] > 0:
            assert f[d] >= out[d]


def test_finalize_keeps_max_flow():
    g = grid(3, 3)
    c = [4] * g.dart_count
    sol = oracle_maxflow(g, c, [0], [8])
    out = finalize_pseudoflow(g, c, sol.flow, [0], [8])
    assert flow_value(g, out, [8]) == sol.value


def test_finalize_returns_stranded_excess():
    # s=0 -> 1 -> 2 -> t=3 with the last arc narrower
    g = path_graph(4)
    c = [5, 0, 5, 0, 2, 0]
    f = [5, -5, 5, -5, 2, -2]
    out = finalize_pseudoflow(g, c, f, [0], [3])
    assert out == [2, -2, 2, -2, 2, -2]
    assert flow_value(g, out, [3]) == oracle_maxflow(g, c, [0], [3]).value


def test_finalize_rejects_bad_precondition():
    g = path_graph(3)
    c = [5, 0, 5, 0]
    f = [5, -5, 0, 0]  # node 1 holds excess that could still reach t
    with pytest.raises(ContractError):
        finalize_pseudoflow(g, c, f, [0], [2])


def test_push_excess_examples():
    g = path_graph(3)
    assert push_excess_to_terminals(g, [1] * 4, [0] * 4, [0, 2]) == [0] * 4
    assert push_excess_to_terminals(g, [3, 0, 3, 0], [3, -3, 0, 0], [0, 2]) == [0] * 4


def test_certify_flags():
    g = path_graph(2)
    sol = certify(g, [7, 0], [7, -7], [0], [1])
    assert sol.value == 7 and sol.cut == [0] and all(sol.checks.values())
    bad = certify(g, [7, 0], [3, -3], [0], [1])
    assert not bad.checks["separated"]


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_sources_lemma(seed):
    # a flow whose only sources lie in X cannot create A -> B paths when
    # A u X could not reach B before
    rng = random.Random(seed)
    g = grid(rng.randint(2, 5), rng.randint(2, 5))
    c = random_caps(rng, g, 4)
    f0 = random_pseudoflow(rng, g, c)
    nodes = list(range(g.node_count))
    X = rng.sample(nodes, rng.randint(1, 3))
    A = rng.sample(nodes, rng.randint(1, 3))
    before = residual_reachable(g, c, f0, A + X)
    B = [v for v in nodes if not before[v]]
    f = list(f0)
    for _ in range(5):
        path = residual_walk(rng, g, c, f, rng.choice(X))
        if path:
            push_path(rng, c, f, path)
    check_pseudoflow(g, c, f)
    assert not reaches(g, c, f, A, B)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_sinks_lemma(seed):
    rng = random.Random(seed)
    g = grid(rng.randint(2, 5), rng.randint(2, 5))
    c = random_caps(rng, g, 4)
    f0 = random_pseudoflow(rng, g, c)
    nodes = list(range(g.node_count))
    Y = rng.sample(nodes, rng.randint(1, 3))
    B = rng.sample(nodes, rng.randint(1, 3))
    co = residual_coreachable(g, c, f0, B + Y)
    A = [v for v in nodes if not co[v]]
    f = list(f0)
    cr = reversed_capacities(c)
    for _ in range(5):
        # walk backwards from a sink of the new flow
        fr = negate(f)
        path = residual_walk(rng, g, cr, fr, rng.choice(Y))
        if path:
            push_path(rng, cr, fr, path)
            f = negate(fr)
    check_pseudoflow(g, c, f)
    assert not reaches(g, c, f, A, B)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_circulations_keep_separation(seed):
    rng = random.Random(seed)
    g = grid(rng.randint(2, 4), rng.randint(2, 4))
    c = random_caps(rng, g, 3)
    f0 = random_pseudoflow(rng, g, c)
    f = list(f0)
    for _ in range(6):
        cyc = residual_walk(rng, g, c, f, rng.randrange(g.node_count), closed=True)
        if cyc:
            push_path(rng, c, f, cyc)
    assert inflow_vector(g, f) == inflow_vector(g, f0)
    reach0 = [residual_reachable(g, c, f0, [u]) for u in range(g.node_count)]
    reach1 = [residual_reachable(g, c, f, [u]) for u in range(g.node_count)]
    for u in range(g.node_count):
        for v in range(g.node_count):
            if not reach0[u][v]:
                assert not reach1[u][v]
