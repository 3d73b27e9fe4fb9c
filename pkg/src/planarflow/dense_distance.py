"""Boundary distance tables and Dijkstra over them.

A :class:`DistanceTable` stores all distances between the nodes ``X`` of a
piece that lie on one face.  Splitting ``X`` recursively into halves gives
pairs of disjoint consecutive ranges; the submatrix for such a pair is Monge
once the columns are read in the right direction, because two shortest
paths whose endpoints interleave on the face must cross.  Each block gets a
:class:`MongeRmq`, and :func:`fr_dijkstra` uses those blocks to run Dijkstra
on the complete graph over ``X`` without touching every entry.
"""

from __future__ import annotations

import heapq
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as sp_dijkstra

from .errors import ContractError

INF = math.inf
_EXACT = 2 ** 53
_SAFE = 2 ** 59  # bound on |values| for int64 arithmetic in the vectorised Dijkstra
_FAR = 2 ** 62  # missing or settled entries
_SMALL = 12  # tables up to this size use the plain heap scan


# ----------------------------------------------------------------------
# single-source distances on an arc list


def _heap_sssp(n: int, adj: list[list[tuple[int, int]]], s: int) -> list[float]:
    dist = [INF] * n
    dist[s] = 0
    heap = [(0, s)]
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        for w, x in adj[u]:
            nd = du + x
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


def multi_source_distances(n: int, tails: Sequence[int], heads: Sequence[int],
                           lengths: Sequence[int], sources: Sequence[int],
                           targets: Sequence[int] | None = None) -> list[list[float]]:
    """One nonnegative SSSP per source; row ``i`` holds the distances from
    ``sources[i]`` to every node, or to ``targets`` when given.

    Uses scipy when every path length fits a double exactly and a heap
    Dijkstra on Python integers otherwise.
    """
    if not sources:
        return []
    try:
        w_all = np.asarray(lengths, dtype=np.int64)
    except OverflowError:
        w_all = None
    if w_all is None:
        if len(lengths) and min(lengths) < 0:
            raise ContractError(f"negative length {min(lengths)}")
        exact = False
    else:
        if len(w_all) and w_all.min() < 0:
            raise ContractError(f"negative length {int(w_all.min())}")
        # a float sum with a factor-two margin decides exactness cheaply
        exact = float(w_all.sum(dtype=np.float64)) < _EXACT / 2
    if exact and n > 0:
        if len(w_all):
            t = np.asarray(tails, dtype=np.int64)
            h = np.asarray(heads, dtype=np.int64)
            order = np.lexsort((w_all, h, t))
            t, h = t[order], h[order]
            w = w_all[order].astype(np.float64)
            first = np.ones(len(t), dtype=bool)
            first[1:] = (t[1:] != t[:-1]) | (h[1:] != h[:-1])
            t, h, w = t[first], h[first], w[first]
        else:
            t = h = np.zeros(0, dtype=np.int64)
            w = np.zeros(0)
        return _scipy_rows(n, t, h, w, sources, targets)
    if isinstance(lengths, np.ndarray):
        lengths = lengths.tolist()
    tails = tails.tolist() if isinstance(tails, np.ndarray) else tails
    heads = heads.tolist() if isinstance(heads, np.ndarray) else heads
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for a, b, x in zip(tails, heads, lengths):
        adj[a].append((b, x))
    rows = [_heap_sssp(n, adj, s) for s in sources]
    if targets is not None:
        rows = [[row[y] for y in targets] for row in rows]
    return rows


def _scipy_rows(n, t, h, w, sources, targets) -> list[list[float]]:
    # parallel arcs were reduced to their minimum above; stored zeros in a
    # csr matrix built from coordinates count as edges for csgraph
    mat = csr_matrix((w, (t, h)), shape=(n, n))
    res = sp_dijkstra(mat, directed=True, indices=list(sources))
    if targets is not None:
        res = res[:, list(targets)]
    finite = np.isfinite(res)
    rows = np.where(finite, res, 0).astype(np.int64).tolist()
    if not finite.all():
        for i, j in zip(*np.nonzero(~finite)):
            rows[i][j] = INF
    return rows


# ----------------------------------------------------------------------
# Monge range minima


class MongeRmq:
    """Row-interval minima of ``M[i][j] + row_price[i] - col_price[j]``.

    ``M`` must be Monge.  Prices that depend only on the row or only on the
    column keep it Monge, and a row price never moves an argmin, so the
    structure stores, for every segment-tree node over the columns, the
    leftmost argmin of each row as a nondecreasing step function of the row
    (a list of runs).  Two children merge at a single row breakpoint, found
    by binary search.  Queries take O(log^2) time.
    """

    def __init__(self, matrix: Sequence[Sequence[int]],
                 row_price: Sequence[int] | None = None,
                 col_price: Sequence[int] | None = None, check: bool = False):
        self.m = matrix
        self.rows = len(matrix)
        self.cols = len(matrix[0]) if self.rows else 0
        self.rp = list(row_price) if row_price is not None else [0] * self.rows
        self.cp = list(col_price) if col_price is not None else [0] * self.cols
        if check and not is_monge(matrix):
            raise ValueError("matrix is not Monge")
        self.lo: list[int] = []
        self.hi: list[int] = []
        self.kids: list[tuple[int, int]] = []
        self.starts: list[list[int]] = []
        self.args: list[list[int]] = []
        if self.rows and self.cols:
            self.root = self._build(0, self.cols - 1)

    def _reduced(self, i: int, j: int):
        return self.m[i][j] - self.cp[j]

    def _arg(self, node: int, i: int) -> int:
        st = self.starts[node]
        return self.args[node][bisect_right(st, i) - 1]

    def _build(self, lo: int, hi: int) -> int:
        node = len(self.lo)
        self.lo.append(lo)
        self.hi.append(hi)
        self.kids.append((-1, -1))
        self.starts.append([])
        self.args.append([])
        if lo == hi:
            self.starts[node] = [0]
            self.args[node] = [lo]
            return node
        mid = (lo + hi) // 2
        a = self._build(lo, mid)
        b = self._build(mid + 1, hi)
        self.kids[node] = (a, b)
        # first row where the right half is strictly better
        left, right = 0, self.rows
        while left < right:
            i = (left + right) // 2
            if self._reduced(i, self._arg(b, i)) < self._reduced(i, self._arg(a, i)):
                right = i
            else:
                left = i + 1
        cut = left
        st, ar = [], []
        for s_, g_ in zip(self.starts[a], self.args[a]):
            if s_ < cut:
                st.append(s_)
                ar.append(g_)
        if cut < self.rows:
            sb, gb = self.starts[b], self.args[b]
            k = bisect_right(sb, cut) - 1
            st.append(cut)
            ar.append(gb[k])
            for s_, g_ in zip(sb[k + 1:], gb[k + 1:]):
                st.append(s_)
                ar.append(g_)
        self.starts[node] = st
        self.args[node] = ar
        return node

    def row_argmin(self, i: int) -> int:
        return self._arg(self.root, i)

    def value(self, i: int, j: int):
        return self.m[i][j] + self.rp[i] - self.cp[j]

    def query(self, i: int, j1: int, j2: int) -> tuple[int, int]:
        """``(min value, leftmost argmin)`` over columns ``j1..j2``."""
        if not (0 <= i < self.rows) or not (0 <= j1 <= j2 < self.cols):
            raise IndexError("query out of range")
        best = None
        best_j = -1
        stack = [self.root]
        while stack:
            node = stack.pop()
            lo, hi = self.lo[node], self.hi[node]
            if hi < j1 or lo > j2:
                continue
            if j1 <= lo and hi <= j2:
                j = self._arg(node, i)
                v = self._reduced(i, j)
                if best is None or v < best or (v == best and j < best_j):
                    best, best_j = v, j
                continue
            a, b = self.kids[node]
            stack.append(b)
            stack.append(a)
        return best + self.rp[i], best_j


def is_monge(matrix: Sequence[Sequence[float]]) -> bool:
    for i in range(len(matrix) - 1):
        r, s = matrix[i], matrix[i + 1]
        for j in range(len(r) - 1):
            a, b, c, d = r[j], s[j + 1], r[j + 1], s[j]
            if INF in (a, b, c, d):
                return False
            if a + b > c + d:
                return False
    return True


# ----------------------------------------------------------------------
# distance tables


@dataclass
class Block:
    rows: list[int]  # indices into X
    cols: list[int]  # indices into X, in the order that makes it Monge
    monge: bool


@dataclass
class DistanceTable:
    """All-pairs distances between the boundary nodes ``X`` of a piece."""

    X: list[int]
    D: list[list[float]]
    _blocks: list[Block] | None = field(default=None, repr=False)
    _dense: object = field(default=None, repr=False)

    @property
    def blocks(self) -> list[Block]:
        """Monge blocks, built on first use."""
        if self._blocks is None:
            self._blocks = _partition(self.D)
        return self._blocks

    @classmethod
    def from_matrix(cls, D: Sequence[Sequence[float]], X: Sequence[int] | None = None
                    ) -> "DistanceTable":
        k = len(D)
        return cls(list(X) if X is not None else list(range(k)), [list(r) for r in D])

    @property
    def size(self) -> int:
        return len(self.X)

    def int_matrix(self) -> np.ndarray | None:
        """``D`` as int64 with :data:`_FAR` for missing entries, or ``None``
        when some entry is too large for the vectorised Dijkstra."""
        if self._dense is None:
            k = len(self.D)
            arr = np.full((k, k), _FAR, dtype=np.int64)
            big = False
            for i, row in enumerate(self.D):
                for j, x in enumerate(row):
                    if x != INF:
                        if abs(x) >= _SAFE:
                            big = True
                        arr[i, j] = x
            self._dense = False if big else arr
        return None if self._dense is False else self._dense


def _partition(D: list[list[float]]) -> list[Block]:
    blocks = []
    ranges = [(0, len(D))]
    while ranges:
        lo, hi = ranges.pop()
        if hi - lo < 2:
            continue
        mid = (lo + hi) // 2
        left, right = list(range(lo, mid)), list(range(mid, hi))
        for rows, cols in ((left, right), (right, left)):
            blocks.append(_orient(D, rows, cols))
        ranges.append((mid, hi))
        ranges.append((lo, mid))
    return blocks


def _orient(D, rows, cols) -> Block:
    for order in (cols, cols[::-1]):
        sub = [[D[i][j] for j in order] for i in rows]
        if is_monge(sub):
            return Block(rows, list(order), True)
    return Block(rows, cols, False)


def build_distance_table(n: int, tails: Sequence[int], heads: Sequence[int],
                         lengths: Sequence[int], X: Sequence[int]) -> DistanceTable:
    """Distances between the nodes ``X`` of the graph given by an arc list
    on nodes ``0..n-1``; unreachable pairs hold ``math.inf``."""
    D = multi_source_distances(n, tails, heads, lengths, list(X), targets=list(X))
    return DistanceTable.from_matrix(D, X)


# ----------------------------------------------------------------------
# Dijkstra over a distance table plus extra darts


def fr_dijkstra(table: DistanceTable, extra: Sequence[tuple[int, int, int]],
                price: Sequence[int], source: int, method: str = "monge"
                ) -> list[float]:
    """Reduced distances from ``source`` in (complete graph of ``D``) plus
    ``extra`` darts ``(i, j, length)`` over table indices.

    The reduced length of ``i -> j`` is ``length + price[i] - price[j]``
    and must be nonnegative; the result ``psi`` satisfies
    ``psi[y] = dist(source, y) + price[source] - price[y]``.
    """
    if method == "vector":
        # array overhead only pays off on larger tables
        out = None if table.size <= _SMALL else _vector_dijkstra(table, extra, price, source)
        if out is not None:
            return out
        method = "dense"
    k = table.size
    out_extra: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    for i, j, x in extra:
        r = x + price[i] - price[j]
        if r < 0:
            raise ContractError(f"extra dart {i}->{j} has negative reduced length")
        out_extra[i].append((j, r))
    if method == "dense":
        return _dense_dijkstra(table, out_extra, price, source)
    if method != "monge":
        raise ValueError(f"unknown method {method}")
    return _monge_dijkstra(table, out_extra, price, source)


def _vector_dijkstra(table, extra, price, source) -> list[float] | None:
    """Array Dijkstra: one row relaxation per settled node.  Returns
    ``None`` when the numbers are too large for int64."""
    D = table.int_matrix()
    if D is None:
        return None
    k = len(D)
    if k and (max(price) >= _SAFE or min(price) <= -_SAFE):
        return None
    p = np.array(price, dtype=np.int64)
    missing = D >= _FAR
    W = D + p[:, None] - p[None, :]
    W[missing] = _FAR
    np.fill_diagonal(W, _FAR)
    if extra:
        ii = np.fromiter((e[0] for e in extra), dtype=np.int64, count=len(extra))
        jj = np.fromiter((e[1] for e in extra), dtype=np.int64, count=len(extra))
        xs = [e[2] for e in extra]
        if max(xs) >= _SAFE or min(xs) <= -_SAFE:
            return None
        red = np.asarray(xs, dtype=np.int64) + p[ii] - p[jj]
        np.minimum.at(W, (ii, jj), red)
    if (W < 0).any():
        i, j = np.argwhere(W < 0)[0]
        raise ContractError(f"table entry {i}->{j} has negative reduced length")
    key = np.full(k, _FAR, dtype=np.int64)
    key[source] = 0
    dist = [INF] * k
    settled = _FAR + _SAFE
    for _ in range(k):
        u = int(key.argmin())
        du = int(key[u])
        if du >= _FAR:
            break
        dist[u] = du
        W[:, u] = _FAR
        key[u] = settled
        np.minimum(key, W[u] + du, out=key)
    return dist


def _dense_dijkstra(table, out_extra, price, source) -> list[float]:
    k = table.size
    D = table.D
    psi = [INF] * k
    psi[source] = 0
    heap = [(0, source)]
    done = [False] * k
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        row = D[u]
        pu = price[u]
        for w in range(k):
            x = row[w]
            if w == u or x == INF:
                continue
            r = x + pu - price[w]
            if r < 0:
                raise ContractError(f"table entry {u}->{w} has negative reduced length")
            nd = du + r
            if nd < psi[w]:
                psi[w] = nd
                heapq.heappush(heap, (nd, w))
        for w, r in out_extra[u]:
            nd = du + r
            if nd < psi[w]:
                psi[w] = nd
                heapq.heappush(heap, (nd, w))
    return psi


class _Envelope:
    """Active rows of one Monge block and the column interval each owns."""

    def __init__(self, block: Block, table: DistanceTable, price: Sequence[int]):
        self.block = block
        m = [[table.D[i][j] for j in block.cols] for i in block.rows]
        self.rmq = MongeRmq(m, [price[i] for i in block.rows],
                            [price[j] for j in block.cols])
        for r in range(len(block.rows)):
            j = self.rmq.row_argmin(r)
            if self.rmq.value(r, j) < 0:
                raise ContractError("table block has a negative reduced length")
        self.ncols = len(block.cols)
        self.act: list[int] = []  # active local rows, ascending
        self.start: list[int] = []  # first owned column of each active row
        self.off: dict[int, int] = {}
        self.ver: dict[int, int] = {}

    def _val(self, r: int, j: int):
        return self.off[r] + self.rmq.value(r, j)

    def _owner(self, j: int) -> int:
        return self.act[bisect_right(self.start, j) - 1]

    def interval(self, pos: int) -> tuple[int, int]:
        end = self.start[pos + 1] - 1 if pos + 1 < len(self.act) else self.ncols - 1
        return self.start[pos], end

    def insert(self, r: int, offset: int) -> list[int]:
        """Activate row ``r``; returns the rows whose interval changed."""
        self.off[r] = offset
        C = self.ncols
        if not self.act:
            self.act, self.start = [r], [0]
            self.ver[r] = self.ver.get(r, 0) + 1
            return [r]
        p = bisect_right(self.act, r)
        s = self.start[p] if p < len(self.act) else C
        # left part: first column where r strictly beats the owner
        lo, hi = 0, s
        while lo < hi:
            j = (lo + hi) // 2
            if self._val(r, j) < self._val(self._owner(j), j):
                hi = j
            else:
                lo = j + 1
        a = lo
        # right part: last column where r is at least as good as the owner
        lo, hi = s, C
        while lo < hi:
            j = (lo + hi) // 2
            if self._val(r, j) <= self._val(self._owner(j), j):
                lo = j + 1
            else:
                hi = j
        b = lo - 1
        if a > b:
            return []
        changed = [r]
        act, start = [], []
        for pos, row in enumerate(self.act):
            lo_, hi_ = self.interval(pos)
            if hi_ < a or lo_ > b:
                keep_lo = lo_
            elif lo_ < a:
                keep_lo = lo_
                changed.append(row)
            elif hi_ > b:
                keep_lo = b + 1
                changed.append(row)
            else:
                self.ver[row] = self.ver.get(row, 0) + 1  # swallowed
                continue
            if row > r and (not act or act[-1] < r):
                act.append(r)
                start.append(a)
            act.append(row)
            start.append(keep_lo)
        if not act or act[-1] < r:
            act.append(r)
            start.append(a)
        self.act, self.start = act, start
        for row in changed:
            self.ver[row] = self.ver.get(row, 0) + 1
        return changed


def _monge_dijkstra(table, out_extra, price, source) -> list[float]:
    k = table.size
    psi = [INF] * k
    done = [False] * k
    row_of: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    for b, block in enumerate(table.blocks):
        for r, x in enumerate(block.rows):
            row_of[x].append((b, r))
    env: dict[int, _Envelope] = {}
    heap: list[tuple] = [(0, source, -1, 0, 0, 0, 0, 0)]
    psi[source] = 0
    D = table.D

    def push_range(b, e, r, lo, hi):
        val, j = e.rmq.query(r, lo, hi)
        cand = e.off[r] + val
        heapq.heappush(heap, (cand, e.block.cols[j], b, r, lo, hi, e.ver[r], j))

    while heap:
        cand, y, b, r, lo, hi, ver, j = heapq.heappop(heap)
        if b >= 0:
            e = env[b]
            if e.ver[r] != ver:
                continue
            if lo < j:
                push_range(b, e, r, lo, j - 1)
            if j < hi:
                push_range(b, e, r, j + 1, hi)
        if done[y]:
            continue
        done[y] = True
        psi[y] = cand
        for w, x in out_extra[y]:
            if not done[w] and cand + x < psi[w]:
                psi[w] = cand + x
                heapq.heappush(heap, (cand + x, w, -1, 0, 0, 0, 0, 0))
        for b2, r2 in row_of[y]:
            block = table.blocks[b2]
            if not block.monge:
                py = price[y]
                row = D[y]
                for w in block.cols:
                    x = row[w]
                    if x == INF:
                        continue
                    red = x + py - price[w]
                    if red < 0:
                        raise ContractError(f"table entry {y}->{w} has negative reduced length")
                    if not done[w] and cand + red < psi[w]:
                        psi[w] = cand + red
                        heapq.heappush(heap, (cand + red, w, -1, 0, 0, 0, 0, 0))
                continue
            e = env.get(b2)
            if e is None:
                e = env[b2] = _Envelope(block, table, price)
            for row in e.insert(r2, cand):
                pos = e.act.index(row)
                lo2, hi2 = e.interval(pos)
                push_range(b2, e, row, lo2, hi2)
    return psi
