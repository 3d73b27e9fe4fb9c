"""Combinatorial planar embeddings over darts.

Arc ``a`` owns the dart pair ``2a`` (tail -> head, the arc's own direction)
and ``2a + 1`` (the reverse), so ``rev(d) == d ^ 1``.  The embedding is a
rotation system: ``nxt[d]`` is the next dart counterclockwise around
``tail(d)`` and ``prv`` is its inverse.  Faces are the orbits of
``d -> nxt[rev(d)]``; ``face_of[d]`` names the face whose boundary walk
contains ``d``.

Surgeries (arc insertion/removal, node insertion/removal, dart contraction)
mutate a graph in place and can record themselves in a :class:`SurgeryLog`
whose :meth:`SurgeryLog.undo` restores the previous structure exactly,
including index assignment.  Dart and node indices are never recycled;
removed items are only flagged dead.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import NonPlanarEmbeddingError, StructuralError


def rev(d: int) -> int:
    return d ^ 1


class PlanarGraph:
    """A (possibly partially dead) rotation system on darts."""

    def __init__(self, node_count: int, head: list[int], nxt: list[int],
                 node_alive: list[bool] | None = None,
                 dart_alive: list[bool] | None = None):
        if len(head) % 2 or len(nxt) != len(head):
            raise StructuralError("dart arrays must have equal, even length")
        self.node_count = node_count
        self.head = head
        self.nxt = nxt
        self.node_alive = node_alive if node_alive is not None else [True] * node_count
        self.dart_alive = dart_alive if dart_alive is not None else [True] * len(head)
        self.prv = [-1] * len(head)
        self.node_dart = [-1] * node_count
        for d in range(len(head)):
            if self.dart_alive[d]:
                self.prv[nxt[d]] = d
                t = head[d ^ 1]
                if self.node_dart[t] == -1:
                    self.node_dart[t] = d
        self._faces: tuple[list[int], int] | None = None

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def from_rotations(cls, node_count: int,
                       rotations: Sequence[Sequence[int]]) -> "PlanarGraph":
        """Build an embedding from per-node cyclic dart lists.

        Every dart ``0 .. 2m-1`` must appear in exactly one rotation; the
        node whose list contains ``d`` is ``tail(d)``.  Raises
        :class:`StructuralError` on malformed input and
        :class:`NonPlanarEmbeddingError` if a connected component has
        positive genus.
        """
        if len(rotations) != node_count:
            raise StructuralError("need one rotation per node")
        seen: dict[int, int] = {}
        for v, rot in enumerate(rotations):
            for d in rot:
                if d < 0:
                    raise StructuralError(f"negative dart id {d}")
                if d in seen:
                    raise StructuralError(f"dart {d} repeated in rotations")
                seen[d] = v
        dart_count = len(seen)
        if dart_count % 2 or (dart_count and max(seen) != dart_count - 1):
            raise StructuralError("dart ids must be exactly 0..2m-1")
        head = [-1] * dart_count
        nxt = [-1] * dart_count
        for d, t in seen.items():
            head[d ^ 1] = t
        for rot in rotations:
            for i, d in enumerate(rot):
                nxt[d] = rot[(i + 1) % len(rot)]
        g = cls(node_count, head, nxt)
        g.check_planar()
        return g

    @classmethod
    def from_coordinates(cls, coords: Sequence[tuple[float, float]],
                         edges: Sequence[tuple[int, int]]) -> "PlanarGraph":
        """Embed a straight-line drawing; arc ``i`` is ``edges[i]``.

        The drawing is trusted to be crossing-free; the genus check catches
        most violations.
        """
        n = len(coords)
        out: list[list[tuple[float, int]]] = [[] for _ in range(n)]
        for a, (u, v) in enumerate(edges):
            if u == v:
                raise StructuralError("straight-line drawings cannot hold self-loops")
            (xu, yu), (xv, yv) = coords[u], coords[v]
            out[u].append((math.atan2(yv - yu, xv - xu), 2 * a))
            out[v].append((math.atan2(yu - yv, xu - xv), 2 * a + 1))
        rotations = [[d for _, d in sorted(lst)] for lst in out]
        return cls.from_rotations(n, rotations)

    def copy(self) -> "PlanarGraph":
        g = PlanarGraph.__new__(PlanarGraph)
        g.node_count = self.node_count
        g.head = self.head[:]
        g.nxt = self.nxt[:]
        g.prv = self.prv[:]
        g.node_alive = self.node_alive[:]
        g.dart_alive = self.dart_alive[:]
        g.node_dart = self.node_dart[:]
        g._faces = None
        return g

    # ------------------------------------------------------------------
    # queries

    @property
    def dart_count(self) -> int:
        return len(self.head)

    def tail(self, d: int) -> int:
        return self.head[d ^ 1]

    def nodes(self) -> list[int]:
        return [v for v in range(self.node_count) if self.node_alive[v]]

    def darts(self) -> list[int]:
        return [d for d in range(len(self.head)) if self.dart_alive[d]]

    def arc_count(self) -> int:
        return sum(self.dart_alive[0::2])

    def rotation(self, v: int) -> list[int]:
        """Darts leaving ``v`` in counterclockwise order."""
        first = self.node_dart[v]
        if first == -1:
            return []
        nxt = self.nxt
        out = [first]
        d = nxt[first]
        while d != first:
            out.append(d)
            d = nxt[d]
        return out

    def degree(self, v: int) -> int:
        return len(self.rotation(v))

    def faces(self) -> tuple[list[int], int]:
        """``(face_of, face_count)``; dead darts map to -1."""
        if self._faces is None:
            face_of = [-1] * len(self.head)
            nxt, alive = self.nxt, self.dart_alive
            count = 0
            for d0 in range(len(self.head)):
                if not alive[d0] or face_of[d0] != -1:
                    continue
                d = d0
                while face_of[d] == -1:
                    face_of[d] = count
                    d = nxt[d ^ 1]
                count += 1
            self._faces = (face_of, count)
        return self._faces

    @property
    def face_of(self) -> list[int]:
        return self.faces()[0]

    @property
    def face_count(self) -> int:
        return self.faces()[1]

    def face_walk(self, d: int) -> list[int]:
        out = [d]
        e = self.nxt[d ^ 1]
        while e != d:
            out.append(e)
            e = self.nxt[e ^ 1]
        return out

    def out_darts(self) -> list[list[int]]:
        """Live darts grouped by tail, in dart order (not rotation order)."""
        out: list[list[int]] = [[] for _ in range(self.node_count)]
        head, alive = self.head, self.dart_alive
        for d in range(len(head)):
            if alive[d]:
                out[head[d ^ 1]].append(d)
        return out

    def components(self) -> list[list[int]]:
        comp = [-1] * self.node_count
        result = []
        out, head = self.out_darts(), self.head
        for s in range(self.node_count):
            if not self.node_alive[s] or comp[s] != -1:
                continue
            comp[s] = len(result)
            members = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for d in out[u]:
                    w = head[d]
                    if comp[w] == -1:
                        comp[w] = len(result)
                        members.append(w)
                        queue.append(w)
            result.append(members)
        return result

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def euler_characteristics(self) -> list[int]:
        """``V - E + F`` per connected component (2 means planar)."""
        face_of, _ = self.faces()
        out = []
        for members in self.components():
            darts = [d for v in members for d in self.rotation(v)]
            faces = {face_of[d] for d in darts} if darts else {None}
            out.append(len(members) - len(darts) // 2 + len(faces))
        return out

    def genus(self) -> int:
        return sum((2 - chi) // 2 for chi in self.euler_characteristics())

    def check_planar(self) -> None:
        self.check_structure()
        for chi in self.euler_characteristics():
            if chi != 2:
                raise NonPlanarEmbeddingError(
                    f"rotation system has genus {(2 - chi) // 2} on a component")

    def check_structure(self) -> None:
        """Verify the rotation invariants; raises StructuralError."""
        for d in range(len(self.head)):
            alive = self.dart_alive[d]
            if alive != self.dart_alive[d ^ 1]:
                raise StructuralError(f"dart {d} alive but its reverse is not")
            if not alive:
                continue
            t = self.head[d ^ 1]
            if not self.node_alive[t] or not self.node_alive[self.head[d]]:
                raise StructuralError(f"dart {d} touches a dead node")
            if self.prv[self.nxt[d]] != d:
                raise StructuralError(f"nxt/prv mismatch at dart {d}")
            if self.head[self.nxt[d] ^ 1] != t:
                raise StructuralError(f"rotation of dart {d} leaves its tail")
        for v in range(self.node_count):
            if self.node_alive[v] and self.node_dart[v] != -1:
                if self.head[self.node_dart[v] ^ 1] != v:
                    raise StructuralError(f"node_dart of {v} is not incident")

    def signature(self) -> tuple:
        """Hashable structural fingerprint, used to test undo round-trips."""
        live = tuple(d for d in range(len(self.head)) if self.dart_alive[d])
        return (
            self.node_count,
            tuple(self.node_alive),
            live,
            tuple(self.head[d] for d in live),
            tuple(self.nxt[d] for d in live),
            tuple(self.node_dart),
        )

    # ------------------------------------------------------------------
    # primitive surgeries; each records its inverse when a log is given

    def _touch(self) -> None:
        self._faces = None

    def _link_after(self, d: int, after: int, t: int) -> None:
        if after == -1:
            self.nxt[d] = self.prv[d] = d
            self.node_dart[t] = d
        else:
            nx = self.nxt[after]
            self.nxt[after] = d
            self.prv[d] = after
            self.nxt[d] = nx
            self.prv[nx] = d

    def _unlink(self, d: int) -> int:
        """Remove ``d`` from its rotation; returns its predecessor or -1."""
        t = self.head[d ^ 1]
        p, q = self.prv[d], self.nxt[d]
        if p == d:
            self.node_dart[t] = -1
            return -1
        self.nxt[p] = q
        self.prv[q] = p
        if self.node_dart[t] == d:
            self.node_dart[t] = q
        return p

    def add_node(self, log: "SurgeryLog | None" = None) -> int:
        v = self.node_count
        self.node_count += 1
        self.node_alive.append(True)
        self.node_dart.append(-1)
        if log is not None:
            log.entries.append(("add_node", v))
        self._touch()
        return v

    def add_arc(self, u: int, v: int, after_u: int = -1, after_v: int = -1,
                log: "SurgeryLog | None" = None) -> int:
        """Insert arc ``u -> v``; its darts go right after ``after_u`` in
        ``u``'s rotation and after ``after_v`` in ``v``'s (-1 only for an
        isolated endpoint).  Returns the new forward dart."""
        for node, after in ((u, after_u), (v, after_v)):
            if not self.node_alive[node]:
                raise StructuralError(f"node {node} is dead")
            if after == -1 and self.node_dart[node] != -1 and not (u == v):
                raise StructuralError(f"node {node} is not isolated; give a position")
            if after != -1 and (not self.dart_alive[after] or self.head[after ^ 1] != node):
                raise StructuralError(f"dart {after} does not leave node {node}")
        d = len(self.head)
        self.head.extend((v, u))
        self.nxt.extend((d, d + 1))
        self.prv.extend((d, d + 1))
        self.dart_alive.extend((True, True))
        old_u, old_v = self.node_dart[u], self.node_dart[v]
        self._link_after(d, after_u, u)
        if u == v and after_v == -1:
            after_v = d
        self._link_after(d + 1, after_v, v)
        if log is not None:
            log.entries.append(("add_arc", d, old_u, old_v))
        self._touch()
        return d

    def remove_arc(self, d: int, log: "SurgeryLog | None" = None) -> None:
        if not self.dart_alive[d]:
            raise StructuralError(f"dart {d} already removed")
        a = d & ~1
        saved = []
        for x in (a, a + 1):
            t = self.head[x ^ 1]
            saved.append((x, t, self.node_dart[t], self._unlink(x)))
        self.dart_alive[a] = self.dart_alive[a + 1] = False
        if log is not None:
            log.entries.append(("remove_arc", saved))
        self._touch()

    def remove_node(self, v: int, log: "SurgeryLog | None" = None) -> None:
        if self.node_dart[v] != -1:
            raise StructuralError(f"node {v} still has incident darts")
        self.node_alive[v] = False
        if log is not None:
            log.entries.append(("remove_node", v))
        self._touch()

    def contract_dart(self, d: int, log: "SurgeryLog | None" = None) -> int:
        """Merge ``head(d)`` into ``tail(d)``; the darts of the head node are
        spliced into the tail's rotation where ``d`` was.  Returns the
        surviving node."""
        if not self.dart_alive[d]:
            raise StructuralError(f"dart {d} is dead")
        u, v = self.head[d ^ 1], self.head[d]
        if u == v:
            raise StructuralError("cannot contract a self-loop")
        r = d ^ 1
        block = []
        e = self.nxt[r]
        while e != r:
            block.append(e)
            e = self.nxt[e]
        old_u, old_v = self.node_dart[u], self.node_dart[v]
        p, q = self.prv[d], self.nxt[d]
        for e in block:
            self.head[e ^ 1] = u
        if block:
            if p == d:
                for i, e in enumerate(block):
                    self.nxt[e] = block[(i + 1) % len(block)]
                    self.prv[block[(i + 1) % len(block)]] = e
            else:
                self.nxt[p] = block[0]
                self.prv[block[0]] = p
                self.nxt[block[-1]] = q
                self.prv[q] = block[-1]
            self.node_dart[u] = block[0]
        else:
            if p == d:
                self.node_dart[u] = -1
            else:
                self.nxt[p] = q
                self.prv[q] = p
                if old_u == d:
                    self.node_dart[u] = q
        if self.node_dart[u] == d:
            self.node_dart[u] = q
        self.dart_alive[d] = self.dart_alive[r] = False
        self.node_alive[v] = False
        self.node_dart[v] = -1
        if log is not None:
            log.entries.append(("contract", d, u, v, block, p, q, old_u, old_v))
        self._touch()
        return u


@dataclass
class SurgeryLog:
    """Reversible edit history for one :class:`PlanarGraph`."""

    entries: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def undo(self, g: PlanarGraph) -> None:
        """Revert every recorded edit, newest first, and clear the log."""
        while self.entries:
            entry = self.entries.pop()
            kind = entry[0]
            if kind == "add_node":
                g.node_count -= 1
                g.node_alive.pop()
                g.node_dart.pop()
            elif kind == "add_arc":
                _, d, old_u, old_v = entry
                u, v = g.head[d + 1], g.head[d]
                g._unlink(d + 1)
                g._unlink(d)
                for arr in (g.head, g.nxt, g.prv, g.dart_alive):
                    del arr[d:]
                g.node_dart[u] = old_u
                g.node_dart[v] = old_v
            elif kind == "remove_arc":
                saved = entry[1]
                g.dart_alive[saved[0][0]] = g.dart_alive[saved[1][0]] = True
                for x, t, old_nd, p in reversed(saved):
                    g._link_after(x, p, t)
                    g.node_dart[t] = old_nd
            elif kind == "remove_node":
                g.node_alive[entry[1]] = True
            elif kind == "contract":
                _, d, u, v, block, p, q, old_u, old_v = entry
                r = d ^ 1
                g.node_alive[v] = True
                g.dart_alive[d] = g.dart_alive[r] = True
                for e in block:
                    g.head[e ^ 1] = v
                if p == d:
                    g.nxt[d] = g.prv[d] = d
                else:
                    g.nxt[p] = d
                    g.prv[d] = p
                    g.nxt[d] = q
                    g.prv[q] = d
                ring = [r] + block
                for i, e in enumerate(ring):
                    g.nxt[e] = ring[(i + 1) % len(ring)]
                    g.prv[ring[(i + 1) % len(ring)]] = e
                g.node_dart[u] = old_u
                g.node_dart[v] = old_v
            else:  # pragma: no cover - log corruption
                raise StructuralError(f"unknown surgery {kind}")
        g._touch()


# ----------------------------------------------------------------------
# derived graphs


def dual(g: PlanarGraph) -> PlanarGraph:
    """Planar dual sharing dart ids: ``tail*(d) = face_of[d]`` and
    ``head*(d) = face_of[rev(d)]``."""
    if not g.is_connected():
        raise StructuralError("dual is only defined for connected embeddings")
    face_of, count = g.faces()
    n_d = g.dart_count
    head = [-1] * n_d
    nxt = [-1] * n_d
    for d in range(n_d):
        if g.dart_alive[d]:
            head[d] = face_of[d ^ 1]
            nxt[d] = g.nxt[d ^ 1]
        else:
            head[d] = 0
            nxt[d] = d
    if count == 0:  # single isolated node: one face, no darts
        count = 1
    return PlanarGraph(count, head, nxt, dart_alive=g.dart_alive[:])


def subgraph(g: PlanarGraph, nodes: Sequence[int],
             keep_dart: Sequence[bool] | None = None
             ) -> tuple[PlanarGraph, dict[int, int], list[int]]:
    """Compact copy induced by ``nodes`` (in that order).

    A live dart survives when both endpoints are listed and ``keep_dart``
    (if given) is true for it and its reverse.  Rotations are restricted in
    place, so the result inherits the embedding.  Returns
    ``(sub, node_map old->new, origin)`` where ``origin[new_dart]`` is the
    parent dart; arc orientation is preserved.
    """
    node_map = {v: i for i, v in enumerate(nodes)}
    origin: list[int] = []
    for a in range(g.dart_count // 2):
        d = 2 * a
        if not g.dart_alive[d]:
            continue
        if g.head[d] not in node_map or g.head[d + 1] not in node_map:
            continue
        if keep_dart is not None and not (keep_dart[d] and keep_dart[d + 1]):
            continue
        origin.extend((d, d + 1))
    new_of = [-1] * g.dart_count
    for nd, od in enumerate(origin):
        new_of[od] = nd
    head = [node_map[g.head[od]] for od in origin]
    nxt = [0] * len(origin)
    g_nxt = g.nxt
    for nd, od in enumerate(origin):
        # next surviving dart around the same tail
        e = g_nxt[od]
        while new_of[e] == -1:
            e = g_nxt[e]
        nxt[nd] = new_of[e]
    return PlanarGraph(len(nodes), head, nxt), node_map, origin


# ----------------------------------------------------------------------
# surgeries used by the max-flow recursion


def triangulate_and_biconnect(g: PlanarGraph, cap: Sequence[int]
                              ) -> tuple[PlanarGraph, list[int], SurgeryLog]:
    """Add zero-capacity arcs until every face is a triangle.

    ``g`` must be connected, loop-free and free of faces with fewer than
    three sides when it has three or more nodes.  A triangulated loop-free
    embedding has no cut vertex, so the result is also 2-connected.
    Returns a new graph, its extended capacity list and the insertion log.
    """
    if not g.is_connected():
        raise StructuralError("triangulation needs a connected embedding")
    out = g.copy()
    cap2 = list(cap)
    log = SurgeryLog()
    if len(out.nodes()) < 3:
        return out, cap2, log
    adj: dict[int, set[int]] = {v: set() for v in out.nodes()}
    for d in out.darts():
        u, v = out.head[d ^ 1], out.head[d]
        if u == v:
            raise StructuralError("self-loops must be removed before triangulating")
        adj[u].add(v)
    face_of, count = out.faces()
    firsts: dict[int, int] = {}
    for d in out.darts():
        firsts.setdefault(face_of[d], d)
    for f in range(count):
        walk = out.face_walk(firsts[f])
        if len(walk) <= 2:
            raise StructuralError("face with fewer than three sides; merge parallel arcs first")
        if len(walk) > 3:
            _ear_cut(out, walk, adj, cap2, log)
    return out, cap2, log


def _ear_cut(g: PlanarGraph, walk: list[int], adj: dict[int, set[int]],
             cap: list[int], log: SurgeryLog) -> None:
    size = len(walk)
    darts = walk[:]
    nx = [(i + 1) % size for i in range(size)]
    pv = [(i - 1) % size for i in range(size)]
    length = size
    pos = 0
    strict = True
    misses = 0
    while length > 3:
        i, j = pos, nx[pos]
        a = g.head[darts[i] ^ 1]
        c = g.head[darts[j]]
        ok = a != c and (not strict or c not in adj[a])
        if not ok:
            pos = j
            misses += 1
            if misses > length:
                if not strict:
                    raise StructuralError("face cannot be triangulated without loops")
                strict = False
                misses = 0
            continue
        before = darts[pv[i]] ^ 1
        after_c = darts[j] ^ 1
        x = g.add_arc(a, c, before, after_c, log=log)
        cap.extend((0, 0))
        adj[a].add(c)
        adj[c].add(a)
        # walk position i now carries the chord; j drops out
        darts[i] = x
        nx[i] = nx[j]
        pv[nx[j]] = i
        length -= 1
        pos = pv[i]
        misses = 0
        strict = True


def contract_path(g: PlanarGraph, path: Sequence[int]
                  ) -> tuple[PlanarGraph, dict[int, int], SurgeryLog]:
    """Contract the darts of a simple path on a copy of ``g``.

    All path nodes merge into the path's first node; the merged rotation
    is the concatenation produced by successive dart contractions, which
    keeps the embedding planar.
    """
    check_simple_path(g, path)
    out = g.copy()
    log = SurgeryLog()
    root = g.tail(path[0]) if path else None
    mapping = {}
    for d in path:
        mapping[out.head[d]] = root
        out.contract_dart(d, log=log)
    if root is not None:
        mapping[root] = root
    return out, mapping, log


def check_simple_path(g: PlanarGraph, path: Sequence[int]) -> list[int]:
    """Return the node sequence of ``path`` or raise StructuralError."""
    if not path:
        return []
    nodes = [g.tail(path[0])]
    for i, d in enumerate(path):
        if not g.dart_alive[d]:
            raise StructuralError(f"path dart {d} is dead")
        if g.tail(d) != nodes[-1]:
            raise StructuralError(f"path darts {path[i - 1]} and {d} are not consecutive")
        nodes.append(g.head[d])
    if len(set(nodes)) != len(nodes):
        raise StructuralError("path is not simple")
    return nodes


def split_terminal(g: PlanarGraph, cap: Sequence[int], v: int, kind: str,
                   after: int | None = None
                   ) -> tuple[PlanarGraph, list[int], int]:
    """Attach a pendant terminal ``u'`` to ``v``.

    For a source the new arc is ``u' -> v`` with the total capacity of the
    darts leaving ``v``; for a sink it is ``v -> u'`` with the total
    capacity of the darts entering ``v``.  The pendant dart sits right after
    ``after`` in ``v``'s rotation (default: ``v``'s first dart).
    """
    if kind not in ("source", "sink"):
        raise ValueError("kind must be 'source' or 'sink'")
    out = g.copy()
    cap2 = list(cap)
    rot = g.rotation(v)
    u = out.add_node()
    pos = rot[0] if after is None and rot else (after if after is not None else -1)
    if kind == "source":
        total = sum(cap[d] for d in rot)
        out.add_arc(u, v, -1, pos)
    else:
        total = sum(cap[d ^ 1] for d in rot)
        out.add_arc(v, u, pos, -1)
    cap2.extend((total, 0))
    return out, cap2, u


def delete_nodes(g: PlanarGraph, nodes: Iterable[int],
                 log: SurgeryLog | None = None) -> None:
    """Remove ``nodes`` and every incident arc, in place."""
    for v in nodes:
        for d in g.rotation(v):
            if g.dart_alive[d]:
                g.remove_arc(d, log=log)
        g.remove_node(v, log=log)


def insert_arcs_along_cycle(g: PlanarGraph, cycle: Sequence[int],
                            keep: Iterable[int],
                            log: SurgeryLog | None = None) -> list[int]:
    """Add arcs joining consecutive kept nodes of a cycle, in cycle order.

    ``cycle`` lists the darts of a simple cycle.  Each new arc hugs the
    left side of the cycle segment it shortcuts, so once the skipped cycle
    nodes are deleted the embedding is planar again.  Returns the new
    darts as a path from the first kept node to the last.
    """
    nodes = [g.tail(d) for d in cycle]
    keep = set(keep)
    idx = [i for i, v in enumerate(nodes) if v in keep]
    added = []
    for a, b in zip(idx, idx[1:]):
        out_anchor = cycle[a]
        in_anchor = g.prv[cycle[b - 1] ^ 1]
        added.append(g.add_arc(nodes[a], nodes[b], out_anchor, in_anchor, log=log))
    return added


def restrict_to_cycle_subset(g: PlanarGraph, cycle: Sequence[int],
                             keep: Iterable[int],
                             log: SurgeryLog | None = None) -> list[int]:
    """Shortcut the kept cycle nodes with new arcs, then delete the rest of
    the cycle.  Returns the shortcut path darts."""
    keep = set(keep)
    added = insert_arcs_along_cycle(g, cycle, keep, log=log)
    delete_nodes(g, [g.tail(d) for d in cycle if g.tail(d) not in keep], log=log)
    return added
