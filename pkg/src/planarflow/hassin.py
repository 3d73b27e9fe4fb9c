"""Maximum st-flow in planar graphs through shortest paths in the dual.

Convention: the dual dart of ``d`` runs from ``tail*(d) = face_of[d]`` to
``head*(d) = face_of[rev(d)]``.  A face potential ``phi`` induces the
circulation ``rho[d] = phi[head*(d)] - phi[tail*(d)]``; if ``phi`` is a
table of dual distances under lengths ``c - f``, then ``f + rho`` respects
the capacities.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ContractError, StructuralError
from .planar_core import PlanarGraph


def circulation_from_potentials(g: PlanarGraph, phi: Sequence[int]) -> list[int]:
    face_of = g.face_of
    out = [0] * g.dart_count
    for d in range(g.dart_count):
        if g.dart_alive[d]:
            out[d] = phi[face_of[d ^ 1]] - phi[face_of[d]]
    return out


def dual_adjacency(g: PlanarGraph) -> list[list[int]]:
    """Darts grouped by dual tail (the face on their left)."""
    face_of, count = g.faces()
    adj: list[list[int]] = [[] for _ in range(max(count, 1))]
    for d in range(g.dart_count):
        if g.dart_alive[d]:
            adj[face_of[d]].append(d)
    return adj


def dual_shortest_paths(g: PlanarGraph, length: Sequence[int], source: int,
                        adj: list[list[int]] | None = None,
                        init: dict[int, int] | None = None) -> list[float]:
    """Dijkstra over the dual.  Unreachable faces get ``math.inf``.

    ``init`` seeds several faces with starting labels instead of a single
    zero at ``source`` (pass ``source=-1`` then).
    """
    face_of, count = g.faces()
    if adj is None:
        adj = dual_adjacency(g)
    dist = [math.inf] * max(count, 1)
    heap = []
    if init:
        for f, x in init.items():
            if x < dist[f]:
                dist[f] = x
                heap.append((x, f))
        heapq.heapify(heap)
    else:
        dist[source] = 0
        heap.append((0, source))
    done = [False] * len(dist)
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for d in adj[u]:
            x = length[d]
            if x < 0:
                raise ContractError(f"negative dual length {x} at dart {d}")
            w = face_of[d ^ 1]
            nd = du + x
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


def check_potential_feasible(g: PlanarGraph, length: Sequence[int],
                             phi: Sequence[float]) -> None:
    """Every dual dart must satisfy ``phi[head*] <= phi[tail*] + length``."""
    face_of = g.face_of
    for d in range(g.dart_count):
        if g.dart_alive[d]:
            a, b = phi[face_of[d]], phi[face_of[d ^ 1]]
            if a != math.inf and b > a + length[d]:
                raise ContractError(f"potential violates dart {d}")


@dataclass
class StFlow:
    flow: list[int]  # on the input graph's darts
    value: int
    phi: list[int]  # potential on the faces of ``graph``
    graph: PlanarGraph  # the embedding the potential lives on
    return_dart: int  # dart carrying the returning flow (t -> s)


def _cofacial_darts(g: PlanarGraph, s: int, t: int) -> tuple[int, int]:
    face_of = g.face_of
    faces_t = {}
    for d in g.rotation(t):
        faces_t.setdefault(face_of[d], d)
    for d in g.rotation(s):
        if face_of[d] in faces_t:
            return d, faces_t[face_of[d]]
    raise StructuralError(f"nodes {s} and {t} share no face")


def limited_st_planar_maxflow(g: PlanarGraph, c: Sequence[int], s: int, t: int,
                              limit: int | None) -> StFlow:
    """Feasible s-t flow of value ``min(limit, maxflow)``; ``None`` means
    no limit."""
    if s == t:
        raise StructuralError("s and t must differ")
    if not g.is_connected():
        raise StructuralError("graph must be connected")
    ds, dt = _cofacial_darts(g, s, t)
    h = g.copy()
    big = sum(c[d] for d in g.darts()) + 1
    cap = limit if limit is not None else big
    # the return arc t -> s sits in the shared face, splitting it in two
    a = h.add_arc(t, s, h.prv[dt], h.prv[ds])
    length = list(c) + [cap, 0]
    phi = dual_shortest_paths(h, length, h.face_of[a])
    check_potential_feasible(h, length, phi)
    rho = circulation_from_potentials(h, phi)
    value = rho[a]
    return StFlow(rho[:g.dart_count], value, [int(x) for x in phi], h, a)


def st_planar_maxflow(g: PlanarGraph, c: Sequence[int], s: int, t: int) -> StFlow:
    return limited_st_planar_maxflow(g, c, s, t, None)


@dataclass
class ArcPush:
    explicit: int  # net units added on the pushing dart itself
    value: int  # total units moved from tail(d) to head(d)
    phi: list[float]  # potential whose circulation carries the rest


def limited_flow_on_existing_arc(g: PlanarGraph, c: Sequence[int], f: Sequence[int],
                                 d: int, limit: int | None) -> ArcPush:
    """Move up to ``limit`` units from ``tail(d)`` to ``head(d)`` in the
    residual graph of ``f``, using ``rev(d)`` as the returning arc.

    ``d`` is saturated first; the rest goes around a circulation whose
    potential is a table of dual distances from ``head*(d)``.  The total
    added flow is ``circulation(phi)`` plus ``explicit`` units on ``d``.
    """
    if limit is None:
        limit = sum(c[e] for e in g.darts()) + 1
    r = d ^ 1
    first = max(0, min(limit, c[d] - f[d]))
    length = [c[e] - f[e] for e in range(g.dart_count)]
    length[d] -= first
    length[r] = limit - first
    phi = dual_shortest_paths(g, length, g.face_of[r])
    check_potential_feasible(g, length, phi)
    face_of = g.face_of
    around = phi[face_of[d]] - phi[face_of[r]]  # = rho[rev(d)]
    return ArcPush(first + around, first + around, phi)
