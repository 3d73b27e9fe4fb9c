"""Timing runs over generated instances."""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass, asdict

from .generators import generate
from .msms import MsmsTrace, msms_maxflow
from .oracle import oracle_maxflow


@dataclass
class BenchRow:
    n: int
    m: int
    algo: str
    time_ms: float
    value: int
    max_a: int


def _run(algo: str, inst):
    if algo == "msms":
        trace = MsmsTrace()
        sol = msms_maxflow(inst.g, inst.c, inst.S, inst.T, trace=trace)
        return sol.value, max(trace.a_sizes, default=0)
    sol = oracle_maxflow(inst.g, inst.c, inst.S, inst.T)
    return sol.value, 0


def bench(sizes, kind: str = "grid", seed: int = 0, repeats: int = 3,
          algos=("msms", "oracle")) -> list[BenchRow]:
    """Median wall time of ``repeats`` runs per size and algorithm; sizes
    are reported in increasing order."""
    rows = []
    for i, n in enumerate(sorted(sizes)):
        inst = generate(kind, n, seed + i)
        for algo in algos:
            times = []
            value = max_a = 0
            for _ in range(max(repeats, 1)):
                t0 = time.perf_counter()
                value, max_a = _run(algo, inst)
                times.append((time.perf_counter() - t0) * 1000)
            rows.append(BenchRow(inst.n, inst.m, algo, round(statistics.median(times), 3),
                                 value, max_a))
    return rows


def to_csv(rows: list[BenchRow]) -> str:
    out = io.StringIO()
    w = csv.DictWriter(out, fieldnames=list(BenchRow.__dataclass_fields__), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(asdict(r))
    return out.getvalue()


def growth_ratios(rows: list[BenchRow], algo: str = "msms") -> list[tuple[int, int, float]]:
    """``(n, n', time(n') / time(n))`` for consecutive sizes of one algorithm."""
    mine = [r for r in rows if r.algo == algo]
    return [(a.n, b.n, b.time_ms / a.time_ms if a.time_ms else float("inf"))
            for a, b in zip(mine, mine[1:])]
