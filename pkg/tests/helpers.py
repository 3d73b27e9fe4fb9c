"""Shared builders for the test modules."""

from __future__ import annotations

import heapq
import math
import random

from planarflow.flow_core import check_pseudoflow
from planarflow.generators import grid_graph
from planarflow.planar_core import PlanarGraph


def grid(w: int, h: int) -> PlanarGraph:
    return grid_graph(w, h)


def grid_boundary(w: int, h: int) -> list[int]:
    """Outer-face nodes of a grid in walking order."""
    return ([x for x in range(w)] + [w * y + w - 1 for y in range(1, h)]
            + [w * (h - 1) + x for x in range(w - 2, -1, -1)]
            + [w * y for y in range(h - 2, 0, -1)])


def random_caps(rng: random.Random, g: PlanarGraph, hi: int = 9) -> list[int]:
    return [rng.randint(0, hi) for _ in range(g.dart_count)]


def random_pseudoflow(rng: random.Random, g: PlanarGraph, c: list[int]) -> list[int]:
    f = [0] * g.dart_count
    for a in range(0, g.dart_count, 2):
        x = rng.randint(-c[a + 1], c[a])
        f[a], f[a + 1] = x, -x
    check_pseudoflow(g, c, f)
    return f


def random_simple_path(rng: random.Random, g: PlanarGraph, k: int) -> list[int]:
    for _ in range(100):
        u = rng.randrange(g.node_count)
        path, seen = [], {u}
        for _ in range(k):
            opts = [d for d in g.rotation(u) if g.head[d] not in seen]
            if not opts:
                break
            d = rng.choice(opts)
            path.append(d)
            u = g.head[d]
            seen.add(u)
        if path:
            return path
    raise RuntimeError("no path found")


def bellman_ford(n: int, arcs: list[tuple[int, int, int]], s: int) -> list[float]:
    """Shortest distances allowing negative arcs (no negative cycles)."""
    dist = [math.inf] * n
    dist[s] = 0
    for _ in range(n):
        changed = False
        for u, v, x in arcs:
            if dist[u] + x < dist[v]:
                dist[v] = dist[u] + x
                changed = True
        if not changed:
            break
    return dist


def heap_dijkstra(n: int, arcs: list[tuple[int, int, int]], s: int) -> list[float]:
    adj = [[] for _ in range(n)]
    for u, v, x in arcs:
        adj[u].append((v, x))
    dist = [math.inf] * n
    dist[s] = 0
    heap = [(0, s)]
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        for v, x in adj[u]:
            if du + x < dist[v]:
                dist[v] = du + x
                heapq.heappush(heap, (du + x, v))
    return dist


def brute_maxflow(n: int, head: list[int], cap: list[int], S, T) -> int:
    """Max flow by plain DFS augmentation; independent of the library."""
    S, T = set(S), set(T)
    if not S or not T:
        return 0
    res = list(cap)
    adj = [[] for _ in range(n)]
    for d in range(len(head)):
        adj[head[d ^ 1]].append(d)
    total = 0
    while True:
        prev = {s: -1 for s in S}
        stack = list(S)
        found = None
        while stack and found is None:
            u = stack.pop()
            for d in adj[u]:
                w = head[d]
                if res[d] > 0 and w not in prev:
                    prev[w] = d
                    if w in T:
                        found = w
                        break
                    stack.append(w)
        if found is None:
            return total
        path = []
        v = found
        while prev[v] != -1:
            path.append(prev[v])
            v = head[prev[v] ^ 1]
        x = min(res[d] for d in path)
        for d in path:
            res[d] -= x
            res[d ^ 1] += x
        total += x


# one line per acceptance criterion, echoed in the pytest terminal summary
ACCEPTANCE_LINES: list[str] = []


def report_criterion(k: int, ok: bool, detail: str) -> None:
    line = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
