"""Fundamental-cycle separators for triangulated planar embeddings.

A BFS tree is grown from a central node; the arcs outside the tree form a
spanning tree of the dual, and every such arc closes a simple cycle whose
inside is the set of faces below it in that dual tree.  Each candidate is
scored by the heavier of its two open sides, so picking the best one is a
single pass over the non-tree arcs once subtree sizes are known.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import StructuralError
from .planar_core import PlanarGraph


class SeparatorError(StructuralError):
    """No usable cycle separator exists for this input."""


@dataclass
class CycleSeparator:
    cycle: list[int]  # darts, head of each = tail of the next
    inside: set[int]
    outside: set[int]
    inside_weight: int
    outside_weight: int
    total_weight: int

    @property
    def balanced(self) -> bool:
        return 3 * max(self.inside_weight, self.outside_weight) <= 2 * self.total_weight


def choose_weighting(level: int, A: Iterable[int], g: PlanarGraph) -> list[int]:
    """Even depths weigh every node, odd depths only the nodes of ``A``
    (falling back to every node when ``A`` has at most one element)."""
    A = [a for a in A if g.node_alive[a]]
    w = [0] * g.node_count
    if level % 2 == 0 or len(A) <= 1:
        for v in g.nodes():
            w[v] = 1
    else:
        for a in A:
            w[a] = 1
    return w


def _bfs_tree(g: PlanarGraph, root: int, forbidden: set[int]):
    """BFS tree where forbidden nodes are only expanded when nothing else
    is left, so they end up as leaves whenever possible."""
    parent = [-1] * g.node_count  # dart from parent
    depth = [-1] * g.node_count
    depth[root] = 0
    queue = deque([root])
    waiting: deque[int] = deque()
    order = []
    while queue or waiting:
        if not queue:
            queue.append(waiting.popleft())
        u = queue.popleft()
        order.append(u)
        for d in g.rotation(u):
            w = g.head[d]
            if depth[w] == -1:
                depth[w] = depth[u] + 1
                parent[w] = d
                (waiting if w in forbidden else queue).append(w)
    return parent, depth, order


def _center(g: PlanarGraph, start: int) -> int:
    def far(s):
        dist = {s: 0}
        prev = {s: -1}
        queue = deque([s])
        last = s
        while queue:
            u = queue.popleft()
            last = u
            for d in g.rotation(u):
                w = g.head[d]
                if w not in dist:
                    dist[w] = dist[u] + 1
                    prev[w] = u
                    queue.append(w)
        return last, prev, dist

    a, _, _ = far(start)
    b, prev, dist = far(a)
    steps = dist[b] // 2
    v = b
    for _ in range(steps):
        v = prev[v]
    return v


def simple_cycle_separator(g: PlanarGraph, w: Sequence[int],
                           forbidden: Iterable[int] = ()) -> CycleSeparator:
    """Best balanced fundamental cycle that avoids ``forbidden``.

    ``g`` must be connected and every face must be a triangle.  Ties in
    the heavier side's weight go to the shorter cycle, then to the lower
    dart index.  Raises :class:`SeparatorError` when the graph is too small
    or every candidate cycle touches a forbidden node.
    """
    nodes = g.nodes()
    if len(nodes) <= 3:
        raise SeparatorError("graph too small for a cycle separator")
    forbidden = set(forbidden)
    total = sum(w[v] for v in nodes)
    if total <= 0:
        raise SeparatorError("total weight must be positive")
    free = [v for v in nodes if v not in forbidden]
    if not free:
        raise SeparatorError("every node is forbidden")
    root = _center(g, free[0])
    if root in forbidden:
        root = free[0]
    parent, depth, order = _bfs_tree(g, root, forbidden)
    if len(order) != len(nodes):
        raise StructuralError("separator needs a connected graph")
    tree_dart = [False] * g.dart_count
    for v in nodes:
        if parent[v] != -1:
            tree_dart[parent[v]] = tree_dart[parent[v] ^ 1] = True

    # Euler intervals of the primal tree
    children: dict[int, list[int]] = {v: [] for v in nodes}
    for v in order[1:]:
        children[g.tail(parent[v])].append(v)
    tin, tout = _euler(root, children, g.node_count)

    # dual tree over non-tree darts
    face_of, fcount = g.faces()
    fparent = [-1] * fcount  # dart d with head*(d) = child face, i.e. face_of[d ^ 1]
    fseen = [False] * fcount
    froot = face_of[g.rotation(root)[0]]
    fseen[froot] = True
    forder = [froot]
    queue = deque([froot])
    fdarts: list[list[int]] = [[] for _ in range(fcount)]
    for d in g.darts():
        if not tree_dart[d]:
            fdarts[face_of[d]].append(d)
    while queue:
        x = queue.popleft()
        for d in fdarts[x]:
            y = face_of[d ^ 1]
            if not fseen[y]:
                fseen[y] = True
                fparent[y] = d
                forder.append(y)
                queue.append(y)
    if len(forder) != fcount:
        raise StructuralError("non-tree arcs do not span the dual")
    fchildren: dict[int, list[int]] = {x: [] for x in range(fcount)}
    for y in forder[1:]:
        fchildren[face_of[fparent[y]]].append(y)
    fin, fout = _euler(froot, fchildren, fcount)
    fsize = [1] * fcount
    for y in reversed(forder[1:]):
        fsize[face_of[fparent[y]]] += fsize[y]

    cand = [fparent[y] for y in forder[1:]]
    dd = np.array(cand, dtype=np.int64)
    yy = np.array(forder[1:], dtype=np.int64)
    head = np.array(g.head, dtype=np.int64)
    aa, bb = head[dd ^ 1], head[dd]
    bad = np.zeros(len(dd), dtype=bool) | (aa == bb)
    if forbidden:
        forb = np.zeros(g.node_count, dtype=bool)
        forb[list(forbidden)] = True
        bad |= forb[aa] | forb[bb]
    up0 = np.arange(g.node_count, dtype=np.int64)
    for v in nodes:
        if parent[v] != -1:
            up0[v] = g.head[parent[v] ^ 1]
    dep = np.array([max(x, 0) for x in depth], dtype=np.int64)
    top = _lca(up0, dep, aa, bb)
    L = dep[aa] + dep[bb] - 2 * dep[top] + 1
    tin_a, tout_a = np.array(tin), np.array(tout)
    fin_a, fout_a = np.array(fin), np.array(fout)

    def on_path(x):
        return ((tin_a[top] <= tin_a[x]) & (tin_a[x] <= tout_a[top])
                & (((tin_a[x] <= tin_a[aa]) & (tin_a[aa] <= tout_a[x]))
                   | ((tin_a[x] <= tin_a[bb]) & (tin_a[bb] <= tout_a[x]))))

    # forbidden nodes that are inner tree nodes can still lie on a cycle
    for v in forbidden:
        if children.get(v):
            bad |= on_path(v)
    if all(w[v] == 1 for v in nodes):
        fsize_a = np.array(fsize, dtype=np.int64)
        inside = 1 + (fsize_a[yy] - L) // 2
        outside = total - L - inside
    else:
        inside = np.zeros(len(dd), dtype=np.int64)
        outside = np.zeros(len(dd), dtype=np.int64)
        for v in nodes:
            if not w[v]:
                continue
            f = face_of[g.rotation(v)[0]]
            onp = on_path(v)
            ins = ~onp & (fin_a[yy] <= fin[f]) & (fin[f] <= fout_a[yy])
            inside += w[v] * ins
            outside += w[v] * (~onp & ~ins)
    heavy = np.maximum(inside, outside)
    ok = np.flatnonzero(~bad)
    if len(ok) == 0:
        raise SeparatorError("no fundamental cycle avoids the forbidden nodes")
    pick = ok[np.lexsort((dd[ok], L[ok], heavy[ok]))[0]]
    d, y = int(dd[pick]), int(yy[pick])
    a, b = int(aa[pick]), int(bb[pick])
    path = _tree_path(g, parent, depth, b, a, int(top[pick]))
    cycle = path + [d]
    cyc_nodes = {g.tail(e) for e in cycle}
    inside_nodes = set()
    for e in g.darts():
        if fin[y] <= fin[face_of[e]] <= fout[y]:
            v = g.tail(e)
            if v not in cyc_nodes:
                inside_nodes.add(v)
    outside_nodes = set(nodes) - inside_nodes - cyc_nodes
    return CycleSeparator(cycle, inside_nodes, outside_nodes,
                          sum(w[v] for v in inside_nodes),
                          sum(w[v] for v in outside_nodes), total)


def _lca(up0: np.ndarray, dep: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorised lowest common ancestors by binary lifting."""
    levels = [up0]
    span = 1
    while span < max(int(dep.max()), 1):
        levels.append(levels[-1][levels[-1]])
        span *= 2
    a = a.copy()
    b = b.copy()
    swap = dep[a] < dep[b]
    a[swap], b[swap] = b[swap], a[swap].copy()
    diff = dep[a] - dep[b]
    for k, up in enumerate(levels):
        m = (diff >> k) & 1 == 1
        a[m] = up[a[m]]
    for up in reversed(levels):
        m = up[a] != up[b]
        a[m] = up[a[m]]
        b[m] = up[b[m]]
    return np.where(a == b, a, up0[a])


def _tree_path(g, parent, depth, b, a, top) -> list[int]:
    """Darts of the tree path b -> top -> a."""
    up = []
    x = b
    while x != top:
        up.append(parent[x] ^ 1)
        x = g.tail(parent[x])
    down = []
    x = a
    while x != top:
        down.append(parent[x])
        x = g.tail(parent[x])
    return up + down[::-1]


def _euler(root: int, children, size: int) -> tuple[list[int], list[int]]:
    tin = [-1] * size
    tout = [-1] * size
    clock = 0
    stack = [(root, 0)]
    while stack:
        v, i = stack.pop()
        if i == 0:
            tin[v] = clock
            clock += 1
        kids = children[v]
        if i < len(kids):
            stack.append((v, i + 1))
            stack.append((kids[i], 0))
        else:
            tout[v] = clock - 1
    return tin, tout


def check_separator(g: PlanarGraph, sep: CycleSeparator,
                    forbidden: Iterable[int] = ()) -> None:
    """Raise StructuralError unless ``sep`` is a simple cycle avoiding
    ``forbidden`` whose removal disconnects its two sides."""
    cyc = [g.tail(d) for d in sep.cycle]
    if len(set(cyc)) != len(cyc):
        raise StructuralError("separator cycle is not simple")
    for i, d in enumerate(sep.cycle):
        if g.head[d] != g.tail(sep.cycle[(i + 1) % len(sep.cycle)]):
            raise StructuralError("separator darts are not consecutive")
    if set(cyc) & set(forbidden):
        raise StructuralError("separator touches a forbidden node")
    blocked = set(cyc)
    for v in sep.inside:
        for d in g.rotation(v):
            u = g.head[d]
            if u not in blocked and u not in sep.inside:
                raise StructuralError("separator sides are adjacent")
