"""Independent checks of a claimed maximum flow.

Everything here works on the raw dart arrays so that it shares as little
code as possible with the solver being checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .fileformat import Instance
from .flow_core import FlowSolution
from .oracle import generic_reachable


@dataclass
class Report:
    checks: dict[str, bool] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, problems: list[str]) -> None:
        self.checks[name] = not problems
        self.failures.extend(f"{name}: {p}" for p in problems)

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "failures": list(self.failures)}


def _arrays(g):
    alive_d = getattr(g, "dart_alive", None)
    alive_n = getattr(g, "node_alive", None)
    darts = [d for d in range(len(g.head)) if alive_d is None or alive_d[d]]
    nodes = [v for v in range(g.node_count) if alive_n is None or alive_n[v]]
    return darts, nodes


def _inflow(g, darts, f) -> list[int]:
    out = [0] * g.node_count
    for d in darts:
        if f[d] > 0:
            out[g.head[d]] += f[d]
            out[g.head[d ^ 1]] -= f[d]
    return out


def check_flow(g, c: Sequence[int], f: Sequence[int], exempt,
               report: Report, limit: int = 5) -> list[int]:
    """Antisymmetry, capacity and conservation off ``exempt``; returns the
    inflow vector."""
    darts, nodes = _arrays(g)
    if len(f) != len(g.head):
        report.record("shape", [f"flow has {len(f)} entries, expected {len(g.head)}"])
        return [0] * g.node_count
    report.record("antisymmetry", [f"dart {d}: {f[d]} vs reverse {f[d ^ 1]}"
                                   for d in darts if d % 2 == 0 and f[d] != -f[d ^ 1]][:limit])
    report.record("feasibility", [f"dart {d} carries {f[d]} > capacity {c[d]}"
                                  for d in darts if f[d] > c[d]][:limit])
    inf = _inflow(g, darts, f)
    exempt = set(exempt)
    report.record("conservation", [f"node {v} has inflow {inf[v]}"
                                   for v in nodes if v not in exempt and inf[v]][:limit])
    return inf


def verify(inst: Instance, sol: FlowSolution) -> Report:
    """Feasibility, antisymmetry, conservation off ``S u T``, the value,
    residual ``S -/-> T`` and that the cut is an ``S``-``T`` cut whose
    capacity equals the value."""
    g, c, S, T = inst.g, inst.c, inst.S, inst.T
    report = Report()
    f = sol.flow
    inf = check_flow(g, c, f, set(S) | set(T), report)
    if "shape" in report.checks:
        return report
    value = sum(inf[t] for t in set(T))
    report.record("value", [] if value == sol.value
                  else [f"claimed {sol.value}, inflow at sinks is {value}"])
    darts, _ = _arrays(g)
    alive = set(darts)
    cap = [c[d] if d in alive else 0 for d in range(len(g.head))]
    reach = generic_reachable(g.node_count, g.head, cap, f, S)
    report.record("residual", [f"sink {t} is residually reachable" for t in T if reach[t]][:5])
    cut = set(sol.cut)
    bad = [d for d in cut if not 0 <= d < len(g.head)]
    if bad:
        report.record("cut", [f"dart {bad[0]} does not exist"])
        return report
    zero = [0] * len(g.head)
    behind = generic_reachable(g.node_count, g.head, cap, zero, S, skip=cut)
    problems = [f"sink {t} reachable without crossing the cut" for t in T if behind[t]][:5]
    total = sum(cap[d] for d in cut)
    if total != value:
        problems.append(f"cut capacity {total} differs from value {value}")
    report.record("cut", problems)
    return report


def verify_level(g, c: Sequence[int], f: Sequence[int], S, T, A) -> Report:
    """Contract of one recursive call: a feasible pseudoflow conserving off
    ``S u T u A`` with no residual ``S -> T``, ``S -> A`` or ``A -> T`` path."""
    report = Report()
    check_flow(g, c, f, set(S) | set(T) | set(A), report)
    if "shape" in report.checks:
        return report
    darts, _ = _arrays(g)
    alive = set(darts)
    cap = [c[d] if d in alive else 0 for d in range(len(g.head))]
    for name, src, dst in (("S->T", S, T), ("S->A", S, A), ("A->T", A, T)):
        reach = generic_reachable(g.node_count, g.head, cap, f, src)
        report.record(name, [f"{v} is reachable" for v in dst if reach[v]][:5])
    return report
