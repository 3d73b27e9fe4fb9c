"""Plain-text instance files.

Layout (``PMFv1``)::

    PMFv1
    <n> <m>
    r <rotation of node 0 as signed 1-based arc numbers>
    ...                               (n lines)
    a <tail> <head> <cap forward> <cap backward>
    ...                               (m lines)
    S <source nodes>
    T <sink nodes>

``+k`` in a rotation is arc ``k`` leaving the node, ``-k`` is arc ``k``
entering it.  Nodes are numbered from 0.  Writing a parsed file gives back
the same bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import InputError, StructuralError
from .planar_core import PlanarGraph, subgraph

MAGIC = "PMFv1"


@dataclass
class Instance:
    g: PlanarGraph
    c: list[int]
    S: list[int]
    T: list[int]

    @property
    def n(self) -> int:
        return len(self.g.nodes())

    @property
    def m(self) -> int:
        return self.g.arc_count()


def _ref(d: int) -> str:
    return str(d // 2 + 1) if d % 2 == 0 else str(-(d // 2 + 1))


def compact(inst: Instance) -> Instance:
    """Renumber nodes and darts densely."""
    g = inst.g
    if all(g.node_alive) and all(g.dart_alive):
        return inst
    sub, nm, origin = subgraph(g, g.nodes())
    return Instance(sub, [inst.c[od] for od in origin],
                    [nm[v] for v in inst.S], [nm[v] for v in inst.T])


def dumps(inst: Instance) -> str:
    inst = compact(inst)
    g = inst.g
    lines = [MAGIC, f"{g.node_count} {g.dart_count // 2}"]
    for v in range(g.node_count):
        lines.append(" ".join(["r"] + [_ref(d) for d in g.rotation(v)]))
    for a in range(g.dart_count // 2):
        d = 2 * a
        lines.append(f"a {g.tail(d)} {g.head[d]} {inst.c[d]} {inst.c[d + 1]}")
    lines.append(" ".join(["S"] + [str(v) for v in inst.S]))
    lines.append(" ".join(["T"] + [str(v) for v in inst.T]))
    return "\n".join(lines) + "\n"


def loads(text: str) -> Instance:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    pos = 0

    def take(tag: str) -> list[str]:
        nonlocal pos
        if pos >= len(lines):
            raise InputError(f"line {pos + 1}: expected '{tag}' line, got end of file")
        parts = lines[pos].split(" ")
        if parts[0] != tag:
            raise InputError(f"line {pos + 1}: expected '{tag}' line")
        pos += 1
        return parts[1:]

    def ints(parts: list[str], where: int) -> list[int]:
        try:
            return [int(x) for x in parts if x != ""]
        except ValueError:
            raise InputError(f"line {where}: expected integers") from None

    if not lines or lines[0] != MAGIC:
        raise InputError(f"missing '{MAGIC}' header")
    pos = 1
    if len(lines) < 2:
        raise InputError("missing size line")
    size = ints(lines[1].split(" "), 2)
    if len(size) != 2 or min(size) < 0:
        raise InputError("line 2: expected '<n> <m>'")
    n, m = size
    pos = 2
    rotations = []
    for v in range(n):
        refs = ints(take("r"), pos)
        rot = []
        for k in refs:
            if k == 0 or abs(k) > m:
                raise InputError(f"line {pos}: arc reference {k} out of range")
            rot.append(2 * (k - 1) if k > 0 else 2 * (-k - 1) + 1)
        rotations.append(rot)
    c = [0] * (2 * m)
    ends = []
    for a in range(m):
        vals = ints(take("a"), pos)
        if len(vals) != 4:
            raise InputError(f"line {pos}: expected 'a tail head cf cb'")
        u, v, cf, cb = vals
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"line {pos}: endpoint out of range")
        if cf < 0 or cb < 0:
            raise InputError(f"line {pos}: negative capacity")
        c[2 * a], c[2 * a + 1] = cf, cb
        ends.append((u, v))
    S = ints(take("S"), pos)
    T = ints(take("T"), pos)
    if pos != len(lines):
        raise InputError(f"line {pos + 1}: trailing content")
    try:
        g = PlanarGraph.from_rotations(n, rotations)
    except StructuralError as exc:
        raise InputError(f"invalid embedding: {exc}") from exc
    for a, (u, v) in enumerate(ends):
        if g.tail(2 * a) != u or g.head[2 * a] != v:
            raise InputError(f"arc {a + 1}: endpoints disagree with the rotations")
    for v in S + T:
        if not 0 <= v < n:
            raise InputError(f"terminal {v} out of range")
    if len(set(S)) != len(S) or len(set(T)) != len(T) or set(S) & set(T):
        raise InputError("terminal lists must be duplicate-free and disjoint")
    return Instance(g, c, S, T)


def read_instance(path: str | Path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def write_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps(inst))
