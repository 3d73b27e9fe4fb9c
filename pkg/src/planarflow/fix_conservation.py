"""Rerouting flow along a path so excess cannot reach deficit.

Given a simple path ``P = d_1 .. d_k`` and a pseudoflow ``f0``, the
routines below return a pseudoflow ``f`` such that ``f - f0`` conserves off
``P`` and, in the residual graph of ``f``, no node of ``P`` with positive
inflow reaches a node of ``P`` with negative inflow.

All darts of ``P`` first get ``M`` extra capacity (``M`` exceeds the total
capacity); node ``p_i`` is then handled by restoring the capacity of
``d_i`` and pushing as much of its excess as possible across ``d_i``, as a
limited st-flow computed in the dual.  The flow is kept as an explicit part
that differs from ``f0`` only on ``P`` plus a circulation described by face
potentials.

* :func:`fix_conservation_reference` recomputes full dual shortest paths in
  every iteration.
* :func:`fix_conservation_on_path` only tracks potentials of the faces
  touching ``P``, answers each iteration with :func:`fr_dijkstra` over a
  boundary distance table, and recovers a full circulation at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .dense_distance import (INF, DistanceTable, build_distance_table, fr_dijkstra,
                             multi_source_distances)
from .errors import ContractError, StructuralError
from .flow_core import check_pseudoflow, inflow_vector, residual_reachable
from .hassin import circulation_from_potentials, dual_adjacency, dual_shortest_paths
from .planar_core import PlanarGraph, check_simple_path


def big_m(g: PlanarGraph, c: Sequence[int]) -> int:
    return sum(c[d] for d in g.darts()) + 1


def _path_nodes(g: PlanarGraph, P: Sequence[int]) -> list[int]:
    if not P:
        raise StructuralError("path must have at least one dart")
    return check_simple_path(g, P)


def _start_inflow(g, f0, nodes, offset) -> list[int]:
    inf = [sum(f0[e ^ 1] for e in g.rotation(p)) for p in nodes]
    if offset is not None:
        inf = [a + offset[p] for a, p in zip(inf, nodes)]
    return inf


def fix_conservation_reference(g: PlanarGraph, P: Sequence[int], c: Sequence[int],
                               f0: Sequence[int],
                               inflow_offset: Sequence[int] | None = None,
                               checkpoint: Callable[[int, list[int], list[int]], None] | None = None
                               ) -> list[int]:
    """Straightforward version: one full dual Dijkstra per path dart.

    ``inflow_offset`` (per node) is added to every inflow the procedure
    looks at; it lets a caller fix conservation of ``base + f0`` while only
    passing the residual capacities ``c - base`` and the flow ``f0``.
    ``checkpoint(i, flow, cap)`` sees the full flow after iteration ``i``
    and the capacities in force at that moment.
    """
    nodes = _path_nodes(g, P)
    check_pseudoflow(g, c, f0)
    M = big_m(g, c)
    cap = list(c)
    for d in P:
        cap[d] += M
        cap[d ^ 1] += M
    f = list(f0)
    face_of, count = g.faces()
    adj = dual_adjacency(g)
    phi = [0] * count
    v = _start_inflow(g, f0, nodes, inflow_offset)

    def total(d):
        return f[d] + phi[face_of[d ^ 1]] - phi[face_of[d]]

    for i, di in enumerate(P):
        for d in (di, di ^ 1):
            cap[d] -= M
            old = total(d)
            new = min(old, cap[d])
            if new != old:
                f[d] += new - old
                f[d ^ 1] = -f[d]
                v[i + (d == di)] += new - old
                v[i + (d != di)] -= new - old
        excess = v[i]
        d = di if excess > 0 else di ^ 1
        fwd = d == di
        there = i + 1 if fwd else i  # index of head(d)
        here = i if fwd else i + 1
        val = min(cap[d] - total(d), abs(v[i]))
        f[d] += val
        f[d ^ 1] = -f[d]
        v[here] -= val
        v[there] += val
        length = [cap[e] - total(e) if g.dart_alive[e] else 0 for e in range(g.dart_count)]
        length[d ^ 1] = abs(v[i])
        phi_i = dual_shortest_paths(g, length, face_of[d ^ 1], adj)
        val = phi_i[face_of[d ^ 1]] - phi_i[face_of[d]]
        f[d] -= val
        f[d ^ 1] = -f[d]
        v[here] += val
        v[there] -= val
        for x in range(count):
            phi[x] += phi_i[x]
        if checkpoint is not None:
            rho = circulation_from_potentials(g, phi)
            checkpoint(i, [a + b for a, b in zip(f, rho)], list(cap))
    rho = circulation_from_potentials(g, phi)
    out = [a + b for a, b in zip(f, rho)]
    check_pseudoflow(g, c, out)
    return out


# ----------------------------------------------------------------------
# efficient version


@dataclass
class ImplicitFlow:
    """Explicit flow on the path darts plus potentials of the faces that
    touch the path; ``v[j]`` is the inflow at ``p_j``."""

    g: PlanarGraph
    P: list[int]
    cap: list[int]  # current capacities (path darts may still carry +M)
    f: list[int]  # explicit part; equals f0 off the path
    X: list[int]  # faces touching the path, in boundary order
    phi: list[int]  # potential per entry of X
    v: list[int]
    tail_x: dict[int, int] = field(default_factory=dict)  # dart -> X index of tail*
    head_x: dict[int, int] = field(default_factory=dict)

    def total(self, d: int) -> int:
        """Flow on a path dart including the circulation part."""
        return self.f[d] + self.phi[self.head_x[d]] - self.phi[self.tail_x[d]]

    def residual(self, d: int) -> int:
        return self.cap[d] - self.total(d)

    def _move(self, i: int, d: int, x: int) -> None:
        """Account ``x`` extra units on path dart ``d`` adjacent to ``p_i``."""
        self.f[d] += x
        self.f[d ^ 1] = -self.f[d]
        fwd = d == self.P[i]
        self.v[i + 1 if fwd else i] += x
        self.v[i if fwd else i + 1] -= x

    def capacity_restore(self, i: int, M: int) -> None:
        """Drop the extra ``M`` on ``d_i`` and ``rev(d_i)`` and clamp the
        total flow to the restored capacities."""
        di = self.P[i]
        for d in (di, di ^ 1):
            self.cap[d] -= M
            old = self.total(d)
            new = min(old, self.cap[d])
            if new != old:
                self._move(i, d, new - old)

    def saturate(self, i: int, d: int) -> int:
        """Push ``min(residual, |v[p_i]|)`` on ``d``; returns the amount."""
        val = min(self.residual(d), abs(self.v[i]))
        if val > 0:
            self._move(i, d, val)
        return max(val, 0)


def path_faces(g: PlanarGraph, P: Sequence[int]) -> list[int]:
    """Faces incident to ``P`` in the order met when walking around it:
    left sides forward, then right sides backward; first occurrence wins."""
    face_of = g.face_of
    seen: dict[int, None] = {}
    for d in P:
        seen.setdefault(face_of[d], None)
    for d in reversed(P):
        seen.setdefault(face_of[d ^ 1], None)
    return list(seen)


def _dual_arcs(g: PlanarGraph, P: Sequence[int], c: Sequence[int], f0: Sequence[int]):
    """Dual darts off ``P`` as arrays ``(dart, tail face, head face, c - f0)``."""
    face_of = np.asarray(g.face_of, dtype=np.int64)
    keep = np.asarray(g.dart_alive, dtype=bool)
    path = np.asarray(P, dtype=np.int64)
    keep[path] = False
    keep[path ^ 1] = False
    darts = np.nonzero(keep)[0]
    try:
        lengths = (np.asarray(c, dtype=np.int64) - np.asarray(f0, dtype=np.int64))[darts]
    except OverflowError:
        lengths = (np.asarray(c, dtype=object) - np.asarray(f0, dtype=object))[darts]
    return darts, face_of[darts], face_of[darts ^ 1], lengths


def boundary_table(g: PlanarGraph, P: Sequence[int], c: Sequence[int],
                   f0: Sequence[int]) -> DistanceTable:
    """Distances between the faces touching ``P`` in the dual with the
    darts of ``P`` removed, under lengths ``c - f0``."""
    _, tails, heads, lengths = _dual_arcs(g, P, c, f0)
    return build_distance_table(g.face_count, tails, heads, lengths, path_faces(g, P))


def fix_conservation_on_path(g: PlanarGraph, P: Sequence[int], c: Sequence[int],
                             f0: Sequence[int],
                             inflow_offset: Sequence[int] | None = None,
                             method: str = "vector",
                             trace: list | None = None) -> list[int]:
    """Efficient version over the boundary distance table.

    Produces the same inflow on every path node as
    :func:`fix_conservation_reference`; the flows themselves may differ by
    a circulation.  ``trace``, when given, receives the ``v`` array after
    each iteration.
    """
    nodes = _path_nodes(g, P)
    check_pseudoflow(g, c, f0)
    P = list(P)
    M = big_m(g, c)
    table = boundary_table(g, P, c, f0)
    X = table.X
    xi = {x: j for j, x in enumerate(X)}
    face_of = g.face_of
    cap = list(c)
    for d in P:
        cap[d] += M
        cap[d ^ 1] += M
    state = ImplicitFlow(g, P, cap, list(f0), X, [0] * len(X),
                         _start_inflow(g, f0, nodes, inflow_offset))
    for d in P:
        for e in (d, d ^ 1):
            state.tail_x[e] = xi[face_of[e]]
            state.head_x[e] = xi[face_of[e ^ 1]]
    darts = P + [d ^ 1 for d in P]
    for i, di in enumerate(P):
        state.capacity_restore(i, M)
        d = di if state.v[i] > 0 else di ^ 1
        state.saturate(i, d)
        r = d ^ 1
        phi = state.phi
        extra = []
        for e in darts:
            a, b = state.tail_x[e], state.head_x[e]
            if a == b:
                continue
            if e == r:
                length = abs(state.v[i]) - phi[a] + phi[b]
            else:
                length = state.cap[e] - state.f[e]
            extra.append((a, b, length))
        psi = fr_dijkstra(table, extra, phi, state.head_x[d], method=method)
        val = psi[state.tail_x[d]] - psi[state.head_x[d]]
        if val:
            state._move(i, d, val)
        state.phi = [a + b for a, b in zip(phi, psi)]
        if trace is not None:
            trace.append(list(state.v))
    return recover_circulation(g, c, f0, state, table, method)


def recover_circulation(g: PlanarGraph, c: Sequence[int], f0: Sequence[int],
                        state: ImplicitFlow, table: DistanceTable,
                        method: str = "vector") -> list[int]:
    """Turn the explicit flow plus boundary potentials into a full flow.

    Distances from the first boundary face under ``c - f`` are obtained on
    the boundary with one more table Dijkstra, then extended to every face
    by a Dijkstra whose labels start at those values; path darts may have
    negative length but only join boundary faces, whose labels are final.
    """
    f = state.f
    X, phi = state.X, state.phi
    extra = []
    for d in state.P:
        for e in (d, d ^ 1):
            a, b = state.tail_x[e], state.head_x[e]
            if a != b:
                extra.append((a, b, c[e] - f[e]))
    psi = fr_dijkstra(table, extra, phi, 0, method=method)
    init = {X[y]: psi[y] - phi[0] + phi[y] for y in range(len(X)) if psi[y] != INF}
    # one Dijkstra from an extra node joined to the boundary faces by
    # arcs carrying their starting labels
    _, tails, heads, lengths = _dual_arcs(g, state.P, c, f0)
    hub = g.face_count
    lo = min(init.values())
    faces = list(init)
    tails = np.concatenate([tails, np.full(len(faces), hub, dtype=np.int64)])
    heads = np.concatenate([heads, np.asarray(faces, dtype=np.int64)])
    lengths = np.concatenate([lengths, np.asarray([init[x] - lo for x in faces],
                                                  dtype=lengths.dtype)])
    dist = multi_source_distances(hub + 1, tails, heads, lengths, [hub])[0]
    chi = [x + lo for x in dist[:hub]]
    out = [a + b for a, b in zip(f, circulation_from_potentials(g, chi))]
    check_pseudoflow(g, c, out)
    return out


# ----------------------------------------------------------------------
# contract checks


def check_fix_contract(g: PlanarGraph, c: Sequence[int], f0: Sequence[int],
                       f: Sequence[int], P: Sequence[int],
                       inflow_offset: Sequence[int] | None = None) -> None:
    """Raise ContractError unless ``f`` is a valid result for ``(P, f0)``."""
    nodes = set(check_simple_path(g, P))
    check_pseudoflow(g, c, f)
    diff = inflow_vector(g, [a - b for a, b in zip(f, f0)])
    for v in g.nodes():
        if v not in nodes and diff[v]:
            raise ContractError(f"flow change does not conserve at node {v}")
    inf = inflow_vector(g, f)
    if inflow_offset is not None:
        inf = [a + b for a, b in zip(inf, inflow_offset)]
    pos = [p for p in nodes if inf[p] > 0]
    neg = [p for p in nodes if inf[p] < 0]
    if pos and neg:
        seen = residual_reachable(g, c, f, pos)
        if any(seen[p] for p in neg):
            raise ContractError("positive path node still reaches a negative one")
