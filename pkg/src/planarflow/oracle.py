"""Reference maximum-flow solvers on paired dart arrays.

Both solvers accept the same representation as the rest of the package:
``head[d]`` for every dart, ``rev(d) = d ^ 1``, ``cap[d]`` independent per
dart.  Multiple sources and sinks are joined to a super source / sink.
Planarity is not required.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence


def _build(n: int, head: Sequence[int], cap: Sequence[int],
           sources: Iterable[int], sinks: Iterable[int], big: int):
    sources = sorted(set(sources))
    sinks = sorted(set(sinks))
    s, t = n, n + 1
    h = list(head)
    cp = list(cap)
    for v in sources:
        h.extend((v, s))
        cp.extend((big, 0))
    for v in sinks:
        h.extend((t, v))
        cp.extend((big, 0))
    adj: list[list[int]] = [[] for _ in range(n + 2)]
    for d in range(len(h)):
        adj[h[d ^ 1]].append(d)
    return s, t, h, cp, adj


def dinic(n: int, head: Sequence[int], cap: Sequence[int],
          sources: Iterable[int], sinks: Iterable[int],
          skip_nodes: Iterable[int] = (),
          limit: int | None = None) -> tuple[int, list[int]]:
    """Blocking-flow max flow.  Returns ``(value, flow)`` where ``flow`` is
    an antisymmetric list over the input darts.

    ``skip_nodes`` are treated as deleted.  With ``limit`` the total value
    stops at ``min(limit, maxflow)``.
    """
    m = len(head)
    big = sum(c for c in cap if c > 0) + 1
    s, t, h, cp, adj = _build(n, head, cap, sources, sinks, big)
    r = cp[:]  # residual capacities
    skip = [False] * (n + 2)
    for v in skip_nodes:
        skip[v] = True
    remaining = limit if limit is not None else big
    total = 0
    if skip[s] or s == t:
        return 0, [0] * m
    while remaining > 0:
        level = [-1] * (n + 2)
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            lu = level[u] + 1
            if level[t] >= 0 and lu > level[t]:
                break
            for d in adj[u]:
                w = h[d]
                if level[w] < 0 and r[d] > 0 and not skip[w]:
                    level[w] = lu
                    queue.append(w)
        if level[t] < 0:
            break
        ptr = [0] * (n + 2)
        while remaining > 0:
            # iterative DFS for one augmenting path in the level graph
            path: list[int] = []
            u = s
            while u != t:
                lst = adj[u]
                i = ptr[u]
                want = level[u] + 1
                k = len(lst)
                while i < k:
                    d = lst[i]
                    if r[d] > 0 and level[h[d]] == want:
                        break
                    i += 1
                ptr[u] = i
                if i == k:
                    if u == s:
                        break
                    level[u] = -1
                    d = path.pop()
                    u = h[d ^ 1]
                    ptr[u] += 1
                    continue
                path.append(lst[i])
                u = h[lst[i]]
            if u != t:
                break
            x = min(min(r[d] for d in path), remaining)
            for d in path:
                r[d] -= x
                r[d ^ 1] += x
            total += x
            remaining -= x
    return total, [cp[d] - r[d] for d in range(m)]


def edmonds_karp(n: int, head: Sequence[int], cap: Sequence[int],
                 sources: Iterable[int], sinks: Iterable[int]) -> tuple[int, list[int]]:
    """Shortest-augmenting-path max flow, used to cross-check :func:`dinic`."""
    m = len(head)
    big = sum(c for c in cap if c > 0) + 1
    s, t, h, cp, adj = _build(n, head, cap, sources, sinks, big)
    f = [0] * len(h)
    total = 0
    while True:
        via = [-1] * (n + 2)
        via[s] = -2
        queue = deque([s])
        while queue and via[t] == -1:
            u = queue.popleft()
            for d in adj[u]:
                w = h[d]
                if via[w] == -1 and cp[d] - f[d] > 0:
                    via[w] = d
                    queue.append(w)
        if via[t] == -1:
            return total, f[:m]
        path = []
        v = t
        while v != s:
            d = via[v]
            path.append(d)
            v = h[d ^ 1]
        x = min(cp[d] - f[d] for d in path)
        for d in path:
            f[d] += x
            f[d ^ 1] -= x
        total += x


def oracle_maxflow(g, c: Sequence[int], S: Iterable[int], T: Iterable[int]):
    """Maximum flow by :func:`dinic` on any graph exposing ``node_count``
    and ``head`` (paired darts); planarity is not used."""
    from .flow_core import FlowSolution

    S, T = sorted(set(S)), sorted(set(T))
    alive = getattr(g, "dart_alive", None)
    cap = [c[d] if alive is None or alive[d] else 0 for d in range(len(g.head))]
    value, f = dinic(g.node_count, g.head, cap, S, T)
    reach = generic_reachable(g.node_count, g.head, cap, f, S)
    cut = [d for d in range(len(g.head))
           if cap[d] > 0 and reach[g.head[d ^ 1]] and not reach[g.head[d]]]
    return FlowSolution(f, value, cut, {"separated": not any(reach[t] for t in T),
                                        "cut_matches": sum(cap[d] for d in cut) == value})


def generic_reachable(n: int, head: Sequence[int], cap: Sequence[int],
                      f: Sequence[int], sources: Iterable[int],
                      skip: Iterable[int] = ()) -> list[bool]:
    """Residual reachability from plain dart arrays; darts in ``skip`` are
    ignored."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for d in range(len(head)):
        adj[head[d ^ 1]].append(d)
    skip = set(skip)
    seen = [False] * n
    queue = deque()
    for s in sources:
        if not seen[s]:
            seen[s] = True
            queue.append(s)
    while queue:
        u = queue.popleft()
        for d in adj[u]:
            if d in skip or cap[d] - f[d] <= 0:
                continue
            w = head[d]
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    return seen
