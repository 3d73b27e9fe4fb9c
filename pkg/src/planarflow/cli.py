"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 internal
contract violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .bench import bench, growth_ratios, to_csv
from .errors import ContractError, InputError, StructuralError
from .fileformat import Instance, dumps, read_instance
from .flow_core import FlowSolution
from .generators import KINDS, generate
from .matching import augmenting_path_matching, matching_from_instance
from .msms import MsmsTrace, msms_maxflow
from .oracle import oracle_maxflow
from .verify import verify

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_CONTRACT = 0, 1, 2, 3


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, sort_keys=True) if args.json else text)


def _solve(inst: Instance, algo: str, instrument: bool):
    if algo == "oracle":
        return oracle_maxflow(inst.g, inst.c, inst.S, inst.T), None
    trace = MsmsTrace(instrument=instrument)
    return msms_maxflow(inst.g, inst.c, inst.S, inst.T, trace=trace), trace


def cmd_solve(args) -> int:
    inst = read_instance(args.input)
    t0 = time.perf_counter()
    sol, trace = _solve(inst, args.algo, args.instrument)
    ms = (time.perf_counter() - t0) * 1000
    payload = {"n": inst.n, "m": inst.m, "value": sol.value, "time_ms": round(ms, 3),
               "checks": {}}
    code = EXIT_OK
    if args.check:
        report = verify(inst, sol)
        payload["checks"] = report.checks
        if not report.ok:
            payload["failures"] = report.failures
            code = EXIT_VERIFY
    if trace is not None:
        payload["max_a"] = max(trace.a_sizes, default=0)
        if args.instrument:
            payload["checkpoints"] = trace.checkpoints
    if args.output:
        out = dict(payload, flow=[sol.flow[d] for d in range(0, len(sol.flow), 2)],
                   cut=sol.cut)
        Path(args.output).write_text(json.dumps(out, sort_keys=True) + "\n")
    text = f"value {sol.value}  ({ms:.1f} ms)"
    if args.check:
        text += "  verified" if code == EXIT_OK else "\n" + "\n".join(payload["failures"])
    _emit(args, payload, text)
    return code


def cmd_verify(args) -> int:
    inst = read_instance(args.input)
    try:
        data = json.loads(Path(args.solution).read_text())
        arcs = [int(x) for x in data["flow"]]
        value = int(data["value"])
        cut = [int(d) for d in data.get("cut", [])]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read solution: {exc}") from exc
    if len(arcs) != inst.m:
        raise InputError(f"solution has {len(arcs)} arcs, instance has {inst.m}")
    flow = []
    for x in arcs:
        flow.extend((x, -x))
    report = verify(inst, FlowSolution(flow, value, cut))
    _emit(args, dict(report.as_dict(), n=inst.n, m=inst.m, value=value),
          "ok" if report.ok else "\n".join(report.failures))
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_gen(args) -> int:
    inst = generate(args.kind, args.n, args.seed, (args.cap_min, args.cap_max))
    text = dumps(inst)
    if args.output:
        Path(args.output).write_text(text)
        _emit(args, {"n": inst.n, "m": inst.m, "path": args.output},
              f"wrote {args.output}: {inst.n} nodes, {inst.m} arcs")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",") if x]
    rows = bench(sizes, args.kind, args.seed, args.repeats, tuple(args.algos.split(",")))
    csv_text = to_csv(rows)
    if args.output:
        Path(args.output).write_text(csv_text)
    by_n: dict[int, set[int]] = {}
    for r in rows:
        by_n.setdefault(r.n, set()).add(r.value)
    agree = all(len(v) == 1 for v in by_n.values())
    ratios = growth_ratios(rows)
    payload = {"rows": [r.__dict__ for r in rows], "values_agree": agree,
               "ratios": [{"n": a, "n2": b, "ratio": round(x, 3)} for a, b, x in ratios]}
    _emit(args, payload, csv_text.rstrip("\n"))
    return EXIT_OK if agree else EXIT_VERIFY


def cmd_match(args) -> int:
    inst = read_instance(args.input)
    pairs = matching_from_instance(inst)
    payload = {"n": inst.n, "m": inst.m, "size": len(pairs), "pairs": pairs, "checks": {}}
    code = EXIT_OK
    if args.check:
        edges = [(inst.g.tail(d), inst.g.head[d]) for d in range(0, inst.g.dart_count, 2)]
        expect = augmenting_path_matching(inst.g.node_count, edges, inst.S)
        payload["checks"] = {"size_matches_oracle": expect == len(pairs)}
        if expect != len(pairs):
            code = EXIT_VERIFY
    _emit(args, payload, f"matching size {len(pairs)}")
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planarflow",
                                description="Planar max flow with many sources and sinks")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("--input", required=True)
    s.add_argument("--output", help="write the flow as JSON")
    s.add_argument("--algo", choices=("msms", "oracle"), default="msms")
    s.add_argument("--check", action="store_true", help="verify the result")
    s.add_argument("--instrument", action="store_true", help="assert internal checkpoints")
    common(s)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a solution file against an instance")
    v.add_argument("--input", required=True)
    v.add_argument("--solution", required=True)
    common(v)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--kind", choices=KINDS, default="grid")
    g.add_argument("--n", type=int, default=100)
    g.add_argument("--cap-min", type=int, default=0)
    g.add_argument("--cap-max", type=int, default=100)
    g.add_argument("--output")
    common(g)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="time the solvers on generated instances")
    b.add_argument("--kind", choices=KINDS, default="grid")
    b.add_argument("--sizes", default="100,1000")
    b.add_argument("--repeats", type=int, default=3)
    b.add_argument("--algos", default="msms,oracle")
    b.add_argument("--output", help="CSV destination")
    common(b)
    b.set_defaults(func=cmd_bench)

    m = sub.add_parser("match", help="maximum matching; S is the left side, T the right")
    m.add_argument("--input", required=True)
    m.add_argument("--check", action="store_true", help="compare with an augmenting-path oracle")
    common(m)
    m.set_defaults(func=cmd_match)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ContractError, StructuralError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
