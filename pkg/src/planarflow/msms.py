"""Maximum flow with many sources and sinks in a planar embedding.

The recursion splits the graph with a simple cycle separator ``C``,
contracts ``C`` (minus one arc) into a single node ``v`` and solves the two
sides with ``v`` added to their auxiliary set ``A``.  A call returns a
pseudoflow ``f`` that conserves off ``S u T u A`` and whose residual graph
has no ``S -> T``, ``S -> A`` or ``A -> T`` path.  After the children return,
the excess left on ``C`` is routed so that it can no longer reach deficit
on ``C``, then traded with each node of ``A`` in both directions, and the
remainder is sent back to where it came from.

Alternating separator weights (all nodes at even depth, only ``A`` at odd
depth) keep ``|A|`` small.  The cycle may pass through terminals and
auxiliary nodes; each such node hands its role to a new pendant leaf.  A
call that would still give a child more than :data:`A_LIMIT` auxiliary
nodes is solved directly instead.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ContractError, InputError, StructuralError
from .fix_conservation import fix_conservation_on_path, fix_conservation_reference
from .flow_core import (FlowSolution, add, cancel_flow_cycles, certify, check_pseudoflow,
                        conservation_violations, finalize_pseudoflow, inflow_vector, negate,
                        push_back_excess, push_excess_to_terminals, reaches,
                        residual_reachable, reversed_capacities)
from .oracle import dinic
from .planar_core import (PlanarGraph, contract_path, restrict_to_cycle_subset, subgraph,
                          triangulate_and_biconnect)
from .separator import SeparatorError, choose_weighting, simple_cycle_separator

BASE_SIZE = 64
A_LIMIT = 6
CAPACITY_LIMIT = 2 ** 61


@dataclass
class MsmsCall:
    g: PlanarGraph
    c: list[int]
    S: list[int]
    T: list[int]
    A: list[int]
    depth: int = 0


@dataclass
class MsmsResult:
    flow: list[int]
    # residual reachability summaries; all False on success
    s_reaches_t: bool = False
    s_reaches_a: bool = False
    a_reaches_t: bool = False


@dataclass
class MsmsTrace:
    """Bookkeeping collected over one solve."""

    instrument: bool = False
    base_size: int = BASE_SIZE
    fix_method: str = "vector"
    a_sizes: list[int] = field(default_factory=list)
    depths: list[int] = field(default_factory=list)
    base_cases: int = 0
    fallbacks: int = 0  # calls solved directly because a child would exceed A_LIMIT
    checkpoints: int = 0

    def check(self, ok: bool, what: str) -> None:
        self.checkpoints += 1
        if not ok:
            raise ContractError(f"checkpoint failed: {what}")


# ----------------------------------------------------------------------
# pushing excess from the separator cycle to a single node and back


def _cycle_nodes(g: PlanarGraph, C: Sequence[int]) -> list[int]:
    return [g.tail(d) for d in C]


def compute_c_plus(g: PlanarGraph, c: Sequence[int], f0: Sequence[int],
                   C: Sequence[int]) -> set[int]:
    """Nodes of the cycle residually reachable from its positive-inflow nodes."""
    nodes = _cycle_nodes(g, C)
    inf = inflow_vector(g, f0)
    pos = [v for v in nodes if inf[v] > 0]
    if not pos:
        return set()
    seen = residual_reachable(g, c, f0, pos)
    return {v for v in nodes if seen[v]}


def _fix_on_shortcut(g: PlanarGraph, res: list[int], f: list[int], C: Sequence[int],
                     keep: set[int], base_in: list[int], method: str) -> list[int]:
    """Reroute ``f`` among ``keep`` along a path of zero-capacity arcs that
    joins the kept cycle nodes once the rest of the cycle is deleted."""
    h = g.copy()
    path = restrict_to_cycle_subset(h, C, keep)
    start = h.tail(path[0])
    seen = {start}
    order = [start]
    queue = deque([start])
    out = h.out_darts()
    while queue:
        u = queue.popleft()
        for d in out[u]:
            w = h.head[d]
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    sub, node_map, origin = subgraph(h, order)
    new_id = {od: nd for nd, od in enumerate(origin)}
    artificial = set(path) | {d ^ 1 for d in path}
    cs = [0 if od in artificial else res[od] for od in origin]
    fs = [0 if od in artificial else f[od] for od in origin]
    offset = [0] * sub.node_count
    for v, i in node_map.items():
        offset[i] = base_in[v]
    out = fix_conservation_on_path(sub, [new_id[d] for d in path], cs, fs,
                                   inflow_offset=offset, method=method)
    f = list(f)
    for nd, od in enumerate(origin):
        if od in artificial:
            if out[nd]:
                raise ContractError("flow left on a shortcut arc")
        else:
            f[od] = out[nd]
    return f


def cycle_to_single_sink_limited(g: PlanarGraph, c: Sequence[int], f0: Sequence[int],
                                 C: Sequence[int], t: int,
                                 method: str = "vector") -> list[int]:
    """Send as much positive inflow of the cycle ``C`` to ``t`` as possible.

    ``C`` lists the darts of a simple cycle not containing ``t``.  The
    returned ``f`` differs from ``f0`` by a flow that conserves off
    ``C+ u {t}``, leaves no node of ``C+`` with negative inflow, and the
    positive-inflow nodes of ``C`` no longer reach ``t`` residually.
    """
    nodes = _cycle_nodes(g, C)
    if t in nodes:
        raise StructuralError("the sink must not lie on the cycle")
    plus = compute_c_plus(g, c, f0, C)
    if not plus:
        return list(f0)
    base_in = inflow_vector(g, f0)
    if any(base_in[v] < 0 for v in plus):
        raise ContractError("a reachable cycle node has negative inflow")
    res = [c[d] - f0[d] if g.dart_alive[d] else 0 for d in range(g.dart_count)]
    kept = [v for v in nodes if v in plus]
    dropped = [v for v in nodes if v not in plus]
    _, f = dinic(g.node_count, g.head, res, kept, [t], skip_nodes=dropped)
    if len(kept) > 1:
        f = _fix_on_shortcut(g, res, f, C, plus, base_in, method)
    f = cancel_flow_cycles(g, f)
    offset = [0] * g.node_count
    for v in plus:
        offset[v] = base_in[v]
    f = push_back_excess(g, f, [t], offset=offset, deficits_only=True)
    return add(f0, f)


def single_source_to_cycle_limited(g: PlanarGraph, c: Sequence[int], f0: Sequence[int],
                                   s: int, C: Sequence[int],
                                   method: str = "vector") -> list[int]:
    """Mirror image of :func:`cycle_to_single_sink_limited`: fill as much
    negative inflow on ``C`` from ``s`` as possible, by reversing every dart."""
    out = cycle_to_single_sink_limited(g, reversed_capacities(c), negate(f0), C, s,
                                       method=method)
    return negate(out)


# ----------------------------------------------------------------------
# recursion


def _base_case(g: PlanarGraph, c: Sequence[int], S, T, A) -> list[int]:
    cap = [c[d] if g.dart_alive[d] else 0 for d in range(g.dart_count)]
    _, f1 = dinic(g.node_count, g.head, cap, S, list(T) + list(A))
    res = [a - b for a, b in zip(cap, f1)]
    _, f2 = dinic(g.node_count, g.head, res, A, T)
    return add(f1, f2)


def _simplify(g: PlanarGraph, c: Sequence[int]):
    """Drop self-loops and merge parallel arcs.  Returns the simple graph,
    its capacities and a function carrying flows back to ``g``."""
    keep = [False] * g.dart_count
    groups: dict[int, list[int]] = {}
    first: dict[tuple[int, int], int] = {}
    changed = False
    for d in range(0, g.dart_count, 2):
        if not g.dart_alive[d]:
            continue
        u, v = g.head[d + 1], g.head[d]
        if u == v:
            changed = True
            continue
        key = (min(u, v), max(u, v))
        if key in first:
            groups[first[key]].append(d)
            changed = True
        else:
            first[key] = d
            groups[d] = [d]
            keep[d] = keep[d + 1] = True
    if not changed:
        return g, list(c), lambda f: list(f)
    h, _, origin = subgraph(g, g.nodes(), keep)
    tail = g.tail
    members = []
    ch = []
    for od in origin:
        group = groups[od & ~1]
        if len(group) == 1:
            members.append([od])
            ch.append(c[od])
            continue
        same = [x if tail(x) == tail(od) else x ^ 1 for x in group]
        members.append(same)
        ch.append(sum(c[x] for x in same))

    def back(fh: Sequence[int]) -> list[int]:
        out = [0] * g.dart_count
        for nd in range(0, len(origin), 2):
            x = fh[nd]
            darts = members[nd] if x >= 0 else members[nd + 1]
            left = abs(x)
            for e in darts:
                y = min(left, c[e])
                out[e] += y
                out[e ^ 1] -= y
                left -= y
                if not left:
                    break
        return out

    return h, ch, back


def _attach_pendant(g: PlanarGraph, c: list[int], v: int, kind: str,
                    after: int = -1) -> int:
    """Move the terminal or auxiliary role of ``v`` to a new leaf, in place.

    The leaf arc can carry everything ``v`` could send (source), receive
    (sink) or both (aux), so reachability through ``v`` is unchanged.
    """
    rot = g.rotation(v)
    after = rot[0] if after == -1 else after
    out_cap = sum(c[d] for d in rot)
    in_cap = sum(c[d ^ 1] for d in rot)
    u = g.add_node()
    if kind == "sink":
        g.add_arc(v, u, after, -1)
        c.extend((in_cap, 0))
    else:
        g.add_arc(u, v, -1, after)
        c.extend((out_cap, in_cap if kind == "aux" else 0))
    return u


def _corner_towards(t: PlanarGraph, cycle: Sequence[int], i: int, side: set[int]) -> int:
    """A dart out of the ``i``-th cycle node after which a new dart lies in
    the region holding ``side`` (best effort when no neighbour tells)."""
    dout, din = cycle[i], cycle[i - 1] ^ 1
    corners = []
    for start, stop in ((dout, din), (din, dout)):
        heads = []
        d = t.nxt[start]
        while d != stop:
            heads.append(t.head[d])
            d = t.nxt[d]
        corners.append((start, heads))
    for start, heads in corners:
        if any(h in side for h in heads):
            return start
    return corners[0][0]


def _side(tc: PlanarGraph, root: int, block: list[int]) -> list[int]:
    """Nodes reached from ``root`` through the darts of ``block``."""
    order = [root]
    seen = {root}
    queue = deque()
    for d in block:
        w = tc.head[d]
        if w not in seen:
            seen.add(w)
            order.append(w)
            queue.append(w)
    out = tc.out_darts()
    while queue:
        u = queue.popleft()
        for d in out[u]:
            w = tc.head[d]
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def _check_level_result(g, c, f, S, T, A, trace: MsmsTrace, where: str) -> None:
    trace.check(not conservation_violations(g, f, set(S) | set(T) | set(A)),
                f"{where}: conservation off S, T, A")
    trace.check(not reaches(g, c, f, S, T), f"{where}: S reaches T")
    trace.check(not reaches(g, c, f, S, A), f"{where}: S reaches A")
    trace.check(not reaches(g, c, f, A, T), f"{where}: A reaches T")


def _cycle_signs(g, f, nodes):
    inf = inflow_vector(g, f)
    return [v for v in nodes if inf[v] > 0], [v for v in nodes if inf[v] < 0]


def _split_level(call: MsmsCall, trace: MsmsTrace) -> list[int] | None:
    """One level of the recursion; ``None`` asks for a direct solve."""
    h, ch, back = _simplify(call.g, call.c)
    t, ct, _ = triangulate_and_biconnect(h, ch)
    A = sorted(call.A)
    try:
        sep = simple_cycle_separator(t, choose_weighting(call.depth, A, t))
    except SeparatorError:
        return None
    cycle = sep.cycle
    nodes = _cycle_nodes(t, cycle)
    on_cycle = set(nodes)
    S = sorted(call.S)
    T = sorted(call.T)
    S2 = [v for v in S if v not in on_cycle]
    T2 = [v for v in T if v not in on_cycle]
    A2 = [a for a in A if a not in on_cycle]
    n_in = sum(1 for a in A2 if a in sep.inside)
    n_out = len(A2) - n_in
    for i, v in enumerate(nodes):
        if v in call.S:
            S2.append(_attach_pendant(t, ct, v, "source"))
        elif v in call.T:
            T2.append(_attach_pendant(t, ct, v, "sink"))
        elif v in call.A:
            # the leaf joins whichever side holds fewer auxiliary nodes
            side = sep.inside if n_in <= n_out else sep.outside
            n_in, n_out = (n_in + 1, n_out) if n_in <= n_out else (n_in, n_out + 1)
            A2.append(_attach_pendant(t, ct, v, "aux", _corner_towards(t, cycle, i, side)))

    # split along the contracted cycle
    P, e = cycle[:-1], cycle[-1]
    tc, _, _ = contract_path(t, P)
    root = t.tail(P[0])
    rot = tc.rotation(root)
    i, j = rot.index(e), rot.index(e ^ 1)
    k = len(rot)
    blocks = [[rot[(i + 1 + x) % k] for x in range((j - i - 1) % k)],
              [rot[(j + 1 + x) % k] for x in range((i - j - 1) % k)]]
    sides = []
    for block in blocks:
        side = _side(tc, root, [d for d in block if tc.head[d] != root])
        members = set(side)
        child_A = sorted({a for a in A2 if a in members} | {root})
        if len(child_A) > A_LIMIT:
            trace.fallbacks += 1
            return None
        sides.append((block, side, child_A))
    S_set, T_set = set(S2), set(T2)
    f = [0] * t.dart_count
    for block, side, child_A in sides:
        allowed = set(block)
        keep = [True] * tc.dart_count
        for d in rot:
            if d not in allowed or tc.head[d] == root:
                keep[d] = keep[d ^ 1] = False
        sub, nm, origin = subgraph(tc, side, keep)
        res = msms_recursive(MsmsCall(sub, [ct[od] for od in origin],
                                      [nm[v] for v in side if v in S_set],
                                      [nm[v] for v in side if v in T_set],
                                      [nm[a] for a in child_A], call.depth + 1), trace)
        for nd, od in enumerate(origin):
            f[od] += res.flow[nd]

    if trace.instrument:
        _check_between(t, ct, f, S2, T2, A2, nodes, trace, "after the children")
    if trace.instrument:
        ref = fix_conservation_reference(
            t, P, ct, f, checkpoint=lambda it, fl, cap: _check_fix_step(t, P, it, fl, cap, trace))
    f = fix_conservation_on_path(t, P, ct, f, method=trace.fix_method)
    if trace.instrument:
        a, b = inflow_vector(t, ref), inflow_vector(t, f)
        trace.check(all(a[v] == b[v] for v in nodes), "path fixes disagree on inflow")
        pos, neg = _cycle_signs(t, f, nodes)
        trace.check(not reaches(t, ct, f, pos, neg), "after the path fix: C+ reaches C-")
        plus_prev = _reach_set(t, ct, f, pos, nodes)
        minus_prev = _coreach_set(t, ct, f, neg, nodes)
    for a in A2:
        f = cycle_to_single_sink_limited(t, ct, f, cycle, a, method=trace.fix_method)
        if trace.instrument:
            pos, _ = _cycle_signs(t, f, nodes)
            trace.check(not reaches(t, ct, f, pos, [a]), f"cycle excess still reaches {a}")
        f = single_source_to_cycle_limited(t, ct, f, a, cycle, method=trace.fix_method)
        if trace.instrument:
            pos, neg = _cycle_signs(t, f, nodes)
            trace.check(not reaches(t, ct, f, [a], neg), f"{a} still reaches cycle deficit")
            plus = _reach_set(t, ct, f, pos, nodes)
            minus = _coreach_set(t, ct, f, neg, nodes)
            trace.check(plus <= plus_prev, "C+ grew")
            trace.check(minus <= minus_prev, "C- grew")
            plus_prev, minus_prev = plus, minus
    if trace.instrument:
        pos, neg = _cycle_signs(t, f, nodes)
        trace.check(not reaches(t, ct, f, pos, neg), "before push-back: C+ reaches C-")
        trace.check(not reaches(t, ct, f, pos, A2), "before push-back: C+ reaches A")
        trace.check(not reaches(t, ct, f, A2, neg), "before push-back: A reaches C-")
        _check_between(t, ct, f, S2, T2, A2, nodes, trace, "before push-back")
    f = push_excess_to_terminals(t, ct, f, S2 + T2 + A2)
    return back(f[:h.dart_count])


def _reach_set(g, c, f, sources, nodes) -> set[int]:
    if not sources:
        return set()
    seen = residual_reachable(g, c, f, sources)
    return {v for v in nodes if seen[v]}


def _coreach_set(g, c, f, targets, nodes) -> set[int]:
    if not targets:
        return set()
    seen = residual_reachable(g, reversed_capacities(c), negate(f), targets)
    return {v for v in nodes if seen[v]}


def _check_between(g, c, f, S, T, A, C, trace, where) -> None:
    trace.check(not reaches(g, c, f, S, T), f"{where}: S reaches T")
    trace.check(not reaches(g, c, f, S, A), f"{where}: S reaches A")
    trace.check(not reaches(g, c, f, S, C), f"{where}: S reaches C")
    trace.check(not reaches(g, c, f, A, T), f"{where}: A reaches T")
    trace.check(not reaches(g, c, f, C, T), f"{where}: C reaches T")


def _check_fix_step(g, P, i, f, cap, trace) -> None:
    """After handling ``p_i``: processed positive nodes reach no later
    node, processed negative nodes are reached by none, and no processed
    positive node reaches a processed negative one."""
    nodes = [g.tail(P[0])] + [g.head[d] for d in P]
    inf = inflow_vector(g, f)
    for j in range(i + 1):
        later = nodes[j + 1:]
        if inf[nodes[j]] > 0:
            trace.check(not reaches(g, cap, f, [nodes[j]], later), "path node reaches a later one")
        elif inf[nodes[j]] < 0:
            trace.check(not _coreach_set(g, cap, f, [nodes[j]], later),
                        "later path node reaches a negative one")
    done = nodes[:i + 1]
    pos = [v for v in done if inf[v] > 0]
    neg = [v for v in done if inf[v] < 0]
    trace.check(not reaches(g, cap, f, pos, neg), "processed path nodes: positive reaches negative")


def msms_recursive(call: MsmsCall, trace: MsmsTrace | None = None) -> MsmsResult:
    """Pseudoflow that conserves off ``S u T u A`` with no residual
    ``S -> T``, ``S -> A`` or ``A -> T`` path.  ``call.g`` must be compact
    and connected."""
    trace = trace if trace is not None else MsmsTrace()
    trace.a_sizes.append(len(call.A))
    trace.depths.append(call.depth)
    if len(call.A) > A_LIMIT:
        raise ContractError(f"auxiliary set has {len(call.A)} nodes")
    f = None
    if len(call.g.nodes()) > trace.base_size:
        f = _split_level(call, trace)
    if f is None:
        trace.base_cases += 1
        f = _base_case(call.g, call.c, call.S, call.T, call.A)
    if trace.instrument:
        check_pseudoflow(call.g, call.c, f)
        _check_level_result(call.g, call.c, f, call.S, call.T, call.A, trace,
                            f"depth {call.depth}")
    return MsmsResult(f, reaches(call.g, call.c, f, call.S, call.T),
                      reaches(call.g, call.c, f, call.S, call.A),
                      reaches(call.g, call.c, f, call.A, call.T)) if trace.instrument \
        else MsmsResult(f)


def _validate(g: PlanarGraph, c: Sequence[int], S, T) -> None:
    if len(c) != g.dart_count:
        raise InputError("capacity list must have one entry per dart")
    if any(not isinstance(x, int) or x < 0 for x in c):
        raise InputError("capacities must be non-negative integers")
    for v in list(S) + list(T):
        if not (0 <= v < g.node_count) or not g.node_alive[v]:
            raise InputError(f"terminal {v} is not a node")
    if set(S) & set(T):
        raise InputError("sources and sinks must be disjoint")
    if sum(c[d] for d in g.darts()) >= CAPACITY_LIMIT:
        raise InputError("total capacity too large")


def msms_maxflow(g: PlanarGraph, c: Sequence[int], S: Iterable[int], T: Iterable[int],
                 instrument: bool = False, trace: MsmsTrace | None = None,
                 check: bool = True) -> FlowSolution:
    """Maximum flow from the sources ``S`` to the sinks ``T``.

    Each connected component is solved by the recursion; the combined
    pseudoflow is then turned into a feasible flow.  ``trace`` collects the
    auxiliary-set sizes and, with ``instrument``, every internal
    reachability checkpoint is asserted.
    """
    S, T = sorted(set(S)), sorted(set(T))
    _validate(g, c, S, T)
    if trace is None:
        trace = MsmsTrace()
    trace.instrument = trace.instrument or instrument
    c = [c[d] if g.dart_alive[d] else 0 for d in range(g.dart_count)]
    f = [0] * g.dart_count
    S_set, T_set = set(S), set(T)
    for comp in g.components():
        cS = [v for v in comp if v in S_set]
        cT = [v for v in comp if v in T_set]
        if not cS or not cT:
            continue
        sub, nm, origin = subgraph(g, comp)
        res = msms_recursive(MsmsCall(sub, [c[od] for od in origin],
                                      [nm[v] for v in cS], [nm[v] for v in cT], []),
                             trace)
        for nd, od in enumerate(origin):
            f[od] += res.flow[nd]
    f = finalize_pseudoflow(g, c, f, S, T, check=check)
    sol = certify(g, c, f, S, T)
    if check and not all(sol.checks.values()):
        bad = [k for k, ok in sol.checks.items() if not ok]
        raise ContractError(f"solution fails its own certificate: {', '.join(bad)}")
    return sol
