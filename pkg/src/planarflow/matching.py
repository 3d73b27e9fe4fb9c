"""Maximum matching in planar bipartite graphs through the many-source,
many-sink flow solver, plus an augmenting-path oracle."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import Delaunay

from .errors import InputError
from .fileformat import Instance
from .generators import grid_graph, grid_shape
from .msms import msms_maxflow
from .planar_core import PlanarGraph


def _edges(g: PlanarGraph) -> list[tuple[int, int, int]]:
    return [(d, g.tail(d), g.head[d]) for d in range(0, g.dart_count, 2) if g.dart_alive[d]]


def _check_bipartition(g: PlanarGraph, left: set[int], right: set[int]) -> None:
    if left & right:
        raise InputError("the two sides overlap")
    for d, u, v in _edges(g):
        if not ((u in left and v in right) or (u in right and v in left)):
            raise InputError(f"arc {d // 2} ({u}, {v}) does not join the two sides")


def planar_bipartite_matching(g: PlanarGraph, left: Iterable[int],
                              right: Iterable[int]) -> list[tuple[int, int]]:
    """Maximum matching as a sorted list of ``(left node, right node)``.

    Every arc must join ``left`` to ``right`` (in either orientation).
    Each side node gets a pendant terminal with a unit arc, so node
    capacities become arc capacities and the graph stays planar.
    """
    left, right = set(left), set(right)
    _check_bipartition(g, left, right)
    h = g.copy()
    c = [0] * h.dart_count
    for d, u, v in _edges(g):
        if u in left:
            c[d] = 1
        else:
            c[d ^ 1] = 1
    S, T = [], []
    for v in sorted(left | right):
        if not h.rotation(v):
            continue
        p = h.add_node()
        if v in left:
            h.add_arc(p, v, -1, h.node_dart[v])
            S.append(p)
        else:
            h.add_arc(v, p, h.node_dart[v], -1)
            T.append(p)
        c.extend((1, 0))
    sol = msms_maxflow(h, c, S, T)
    pairs = []
    for d, u, v in _edges(g):
        x = sol.flow[d]
        if x > 0:
            pairs.append((u, v))
        elif x < 0:
            pairs.append((v, u))
    if len(pairs) != sol.value:
        raise AssertionError("matching size differs from the flow value")
    return sorted(pairs)


def matching_from_instance(inst: Instance) -> list[tuple[int, int]]:
    """Sources of the instance are the left side, sinks the right side."""
    return planar_bipartite_matching(inst.g, inst.S, inst.T)


def augmenting_path_matching(n: int, edges: Sequence[tuple[int, int]],
                             left: Iterable[int]) -> int:
    """Size of a maximum matching by repeated augmenting-path search."""
    left = sorted(set(left))
    adj: dict[int, list[int]] = {u: [] for u in left}
    lset = set(left)
    for u, v in edges:
        if u in lset:
            adj[u].append(v)
        else:
            adj[v].append(u)
    mate: dict[int, int] = {}  # right -> left
    partner: dict[int, int] = {}  # left -> right

    def augment(u: int) -> bool:
        parent: dict[int, int] = {}
        stack = [u]
        while stack:
            x = stack.pop()
            for v in adj[x]:
                if v in parent:
                    continue
                parent[v] = x
                if v not in mate:
                    while True:
                        a = parent[v]
                        prev = partner.get(a)
                        mate[v] = a
                        partner[a] = v
                        if prev is None:
                            return True
                        v = prev
                stack.append(mate[v])
        return False

    return sum(1 for u in left if augment(u))


def random_bipartite_instance(n: int, seed: int, kind: str = "triangulation") -> Instance:
    """Planar bipartite graph: a grid with random holes or a Delaunay
    triangulation keeping only arcs between two random colour classes."""
    rng = np.random.default_rng(seed)
    if kind == "grid":
        w, h = grid_shape(n)
        full = grid_graph(w, h)
        coords = [(x, y) for y in range(h) for x in range(w)]
        colour = [(x + y) % 2 for x, y in coords]
        keep = [(full.tail(d), full.head[d]) for d in range(0, full.dart_count, 2)
                if rng.random() < 0.7]
    else:
        pts = rng.random((max(n, 3), 2))
        coords = [tuple(p) for p in pts.tolist()]
        colour = rng.integers(0, 2, size=len(coords)).tolist()
        tri = Delaunay(pts)
        pairs = set()
        for a, b, c in tri.simplices:
            for u, v in ((a, b), (b, c), (c, a)):
                pairs.add((int(min(u, v)), int(max(u, v))))
        keep = [(u, v) for u, v in sorted(pairs) if colour[u] != colour[v]]
    keep = [(v, u) if rng.random() < 0.5 else (u, v) for u, v in keep]
    g = PlanarGraph.from_coordinates(coords, keep)
    left = [v for v in range(len(coords)) if colour[v] == 0]
    right = [v for v in range(len(coords)) if colour[v] == 1]
    c = [0] * g.dart_count
    lset = set(left)
    for d in range(0, g.dart_count, 2):
        if g.tail(d) in lset:
            c[d] = 1
        else:
            c[d + 1] = 1
    return Instance(g, c, left, right)
