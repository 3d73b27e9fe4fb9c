"""Pseudoflow algebra on dart arrays.

A flow is a plain list indexed by dart with ``f[d ^ 1] == -f[d]``; a
capacity map is a list of non-negative integers, one per dart, where the two
darts of an arc are independent.  Dead darts of a :class:`PlanarGraph` are
expected to carry zero.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ContractError
from .planar_core import PlanarGraph


class Pseudoflow:
    """Antisymmetric dart flow with an incrementally maintained inflow."""

    def __init__(self, g: PlanarGraph, f: Sequence[int] | None = None):
        self.g = g
        self.f = list(f) if f is not None else [0] * g.dart_count
        self.inflow = inflow_vector(g, self.f)

    def push(self, d: int, x: int) -> None:
        """Send ``x`` more units along dart ``d``."""
        if not x:
            return
        self.f[d] += x
        self.f[d ^ 1] -= x
        self.inflow[self.g.head[d]] += x
        self.inflow[self.g.head[d ^ 1]] -= x

    def recompute(self) -> list[int]:
        self.inflow = inflow_vector(self.g, self.f)
        return self.inflow


def zero_flow(g: PlanarGraph) -> list[int]:
    return [0] * g.dart_count


def inflow_vector(g: PlanarGraph, f: Sequence[int]) -> list[int]:
    out = [0] * g.node_count
    head = g.head
    for d, x in enumerate(f):
        if x:
            out[head[d]] += x
    return out


def inflow(g: PlanarGraph, f: Sequence[int], v: int) -> int:
    return sum(f[d ^ 1] for d in g.rotation(v))


def add(f: Sequence[int], h: Sequence[int]) -> list[int]:
    if len(f) != len(h):
        raise ValueError("flows live on different dart sets")
    return [a + b for a, b in zip(f, h)]


def negate(f: Sequence[int]) -> list[int]:
    return [-x for x in f]


def reversed_capacities(c: Sequence[int]) -> list[int]:
    """Capacities of the graph with every dart reversed."""
    return [c[d ^ 1] for d in range(len(c))]


# ----------------------------------------------------------------------
# predicates


def antisymmetry_violations(f: Sequence[int]) -> list[int]:
    return [d for d in range(0, len(f), 2) if f[d] != -f[d + 1]]


def capacity_violations(g: PlanarGraph, c: Sequence[int], f: Sequence[int]) -> list[int]:
    return [d for d in range(len(f)) if g.dart_alive[d] and f[d] > c[d]]


def conservation_violations(g: PlanarGraph, f: Sequence[int],
                            exempt: Iterable[int] = ()) -> list[int]:
    exempt = set(exempt)
    inf = inflow_vector(g, f)
    return [v for v in g.nodes() if v not in exempt and inf[v] != 0]


def check_pseudoflow(g: PlanarGraph, c: Sequence[int], f: Sequence[int]) -> None:
    """Raise ContractError unless ``f`` is an antisymmetric feasible pseudoflow."""
    bad = antisymmetry_violations(f)
    if bad:
        raise ContractError(f"flow not antisymmetric at dart {bad[0]}")
    bad = capacity_violations(g, c, f)
    if bad:
        d = bad[0]
        raise ContractError(f"dart {d} carries {f[d]} > capacity {c[d]}")


# ----------------------------------------------------------------------
# residual reachability


def residual_reachable(g: PlanarGraph, c: Sequence[int], f: Sequence[int],
                       sources: Iterable[int],
                       blocked: Iterable[int] = ()) -> list[bool]:
    """Nodes reachable from ``sources`` along darts with ``c - f > 0``.

    Nodes in ``blocked`` are never entered (sources are always marked).
    """
    seen = [False] * g.node_count
    for v in blocked:
        seen[v] = True
    queue = deque()
    for s in sources:
        seen[s] = True
        queue.append(s)
    head, nxt, first = g.head, g.nxt, g.node_dart
    while queue:
        u = queue.popleft()
        d0 = first[u]
        if d0 == -1:
            continue
        d = d0
        while True:
            if c[d] - f[d] > 0:
                w = head[d]
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
            d = nxt[d]
            if d == d0:
                break
    blocked = set(blocked)
    if blocked:
        for v in blocked:
            seen[v] = False
        for s in sources:
            seen[s] = True
    return seen


def residual_coreachable(g: PlanarGraph, c: Sequence[int], f: Sequence[int],
                         targets: Iterable[int]) -> list[bool]:
    """Nodes with a residual path into ``targets``."""
    return residual_reachable(g, reversed_capacities(c), negate(f), targets)


def reaches(g: PlanarGraph, c: Sequence[int], f: Sequence[int],
            sources: Iterable[int], targets: Iterable[int]) -> bool:
    """Whether some residual path leads from ``sources`` to ``targets``."""
    sources = list(sources)
    targets = list(targets)
    if not sources or not targets:
        return False
    seen = residual_reachable(g, c, f, sources)
    return any(seen[t] for t in targets)


def min_cut_darts(g: PlanarGraph, reach: Sequence[bool]) -> list[int]:
    """Darts leaving the reachable side."""
    return [d for d in g.darts() if reach[g.head[d ^ 1]] and not reach[g.head[d]]]


# ----------------------------------------------------------------------
# cycle canceling and topological push-back


def cancel_flow_cycles(g: PlanarGraph, f: Sequence[int]) -> list[int]:
    """Remove every directed cycle of positive-flow darts.

    Iterative DFS over the positive-flow subgraph; each time the search
    closes a cycle the bottleneck is subtracted and the saturated darts are
    retired.  Inflows are unchanged and support only shrinks.
    """
    f = list(f)
    n = g.node_count
    head = g.head
    out = _positive_out(g, f)
    cursor = [0] * n
    state = [0] * n  # 0 new, 1 on stack, 2 done
    for root in range(n):
        if state[root] or not out[root]:
            continue
        stack = [root]
        via: list[int] = []  # dart used to enter stack[i + 1]
        state[root] = 1
        while stack:
            u = stack[-1]
            lst = out[u]
            i = cursor[u]
            advanced = False
            while i < len(lst):
                d = lst[i]
                if f[d] > 0:
                    w = head[d]
                    if state[w] == 0:
                        state[w] = 1
                        stack.append(w)
                        via.append(d)
                        advanced = True
                        break
                    if state[w] == 1:
                        # close the cycle w -> ... -> u -> w
                        k = stack.index(w)
                        cyc = via[k:] + [d]
                        delta = min(f[e] for e in cyc)
                        for e in cyc:
                            f[e] -= delta
                            f[e ^ 1] += delta
                        # unwind to the first saturated dart's tail
                        cut = next(j for j, e in enumerate(cyc) if f[e] == 0)
                        for node in stack[k + cut + 1:]:
                            state[node] = 0
                        del stack[k + cut + 1:]
                        del via[k + cut:]
                        advanced = True
                        break
                i += 1
            cursor[u] = i
            if not advanced:
                state[u] = 2
                stack.pop()
                if via:
                    via.pop()
    return f


def _positive_out(g: PlanarGraph, f: Sequence[int]) -> list[list[int]]:
    """Positive-flow darts grouped by tail."""
    out: list[list[int]] = [[] for _ in range(g.node_count)]
    head, alive = g.head, g.dart_alive
    for d, x in enumerate(f):
        if x > 0 and alive[d]:
            out[head[d ^ 1]].append(d)
    return out


def topological_order(g: PlanarGraph, f: Sequence[int]) -> list[int]:
    """Topological order of the positive-flow subgraph.

    Raises ContractError if that subgraph has a cycle.
    """
    out = _positive_out(g, f)
    head = g.head
    indeg = [0] * g.node_count
    for lst in out:
        for d in lst:
            indeg[head[d]] += 1
    order = [v for v in g.nodes() if indeg[v] == 0]
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for d in out[u]:
            w = head[d]
            indeg[w] -= 1
            if indeg[w] == 0:
                order.append(w)
    if len(order) != len(g.nodes()):
        raise ContractError("positive-flow subgraph contains a cycle")
    return order


def is_acyclic(g: PlanarGraph, f: Sequence[int]) -> bool:
    try:
        topological_order(g, f)
    except ContractError:
        return False
    return True


def push_back_excess(g: PlanarGraph, f: Sequence[int],
                     terminals: Iterable[int],
                     offset: Sequence[int] | None = None,
                     movable: Sequence[int] | None = None,
                     deficits_only: bool = False) -> list[int]:
    """Make every non-terminal node conserve by returning flow along its
    own paths: positive excess goes back upstream, deficits downstream.
    With ``deficits_only`` positive excess is left where it is.

    The positive-flow part of ``movable`` (default ``f``) must be acyclic;
    only that flow is reduced.  ``offset`` adds a fixed per-node inflow
    that is not carried by ``movable`` (e.g. the inflow of a base flow the
    caller keeps separately).  Returns the reduced ``movable``.
    """
    term = set(terminals)
    h = list(movable if movable is not None else f)
    inf = inflow_vector(g, h)
    if offset is not None:
        inf = [a + b for a, b in zip(inf, offset)]
    order = topological_order(g, h)
    head = g.head
    for v in ([] if deficits_only else reversed(order)):
        if v in term or inf[v] <= 0:
            continue
        for d in g.rotation(v):
            r = d ^ 1  # incoming dart
            if h[r] > 0:
                x = min(h[r], inf[v])
                h[r] -= x
                h[d] += x
                inf[v] -= x
                inf[head[d]] += x
                if inf[v] == 0:
                    break
        if inf[v] > 0:
            raise ContractError(f"cannot return excess {inf[v]} from node {v}")
    for v in order:
        if v in term or inf[v] >= 0:
            continue
        for d in g.rotation(v):
            if h[d] > 0:
                x = min(h[d], -inf[v])
                h[d] -= x
                h[d ^ 1] += x
                inf[v] += x
                inf[head[d]] -= x
                if inf[v] == 0:
                    break
        if inf[v] < 0:
            raise ContractError(f"cannot absorb deficit {inf[v]} at node {v}")
    return h


def push_excess_to_terminals(g: PlanarGraph, c: Sequence[int], f: Sequence[int],
                             terminals: Iterable[int]) -> list[int]:
    """Cancel flow cycles, then return all excess at non-terminals along
    flow paths.  Feasibility is kept since flow only moves toward zero."""
    h = cancel_flow_cycles(g, f)
    return push_back_excess(g, h, terminals)


def finalize_pseudoflow(g: PlanarGraph, c: Sequence[int], f: Sequence[int],
                        S: Iterable[int], T: Iterable[int],
                        check: bool = True) -> list[int]:
    """Turn a pseudoflow with ``S u V+ -/-> T u V-`` into a maximum flow."""
    S, T = set(S), set(T)
    if check:
        check_pseudoflow(g, c, f)
        inf = inflow_vector(g, f)
        plus = S | {v for v in g.nodes() if inf[v] > 0 and v not in T}
        minus = T | {v for v in g.nodes() if inf[v] < 0 and v not in S}
        if reaches(g, c, f, plus, minus):
            raise ContractError("excess nodes still reach deficit nodes residually")
    return push_excess_to_terminals(g, c, f, S | T)


def flow_value(g: PlanarGraph, f: Sequence[int], T: Iterable[int]) -> int:
    inf = inflow_vector(g, f)
    return sum(inf[t] for t in set(T))


@dataclass
class FlowSolution:
    """A maximum flow with its certificate.

    ``cut`` lists the darts leaving the set of nodes residually reachable
    from the sources; their total capacity equals ``value``.
    """

    flow: list[int]
    value: int
    cut: list[int]
    checks: dict[str, bool] = field(default_factory=dict)


def certify(g: PlanarGraph, c: Sequence[int], f: Sequence[int],
            S: Iterable[int], T: Iterable[int]) -> FlowSolution:
    """Package ``f`` with its value, the source-side cut and the basic
    certification flags."""
    S, T = sorted(set(S)), sorted(set(T))
    reach = residual_reachable(g, c, f, S)
    cut = min_cut_darts(g, reach) if S else []
    value = flow_value(g, f, T)
    checks = {
        "feasible": not antisymmetry_violations(f) and not capacity_violations(g, c, f),
        "conserving": not conservation_violations(g, f, set(S) | set(T)),
        "separated": not any(reach[t] for t in T),
        "cut_matches": sum(c[d] for d in cut) == value,
    }
    return FlowSolution(list(f), value, cut, checks)
