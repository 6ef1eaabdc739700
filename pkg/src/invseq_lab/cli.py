"""Command-line interface: ``invseq-lab <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import formulas, oeis, verify
from .invseq import CountTable, count_table, enumerate_avoiding, parse_patterns
from .lattice import (
    CLASSES,
    KINDS,
    FStep,
    LabeledFPath,
    WeightedHWalk,
    absorb_steps,
    enumerate_paths,
    path_to_json,
    step_to_dict,
    steps_from_json,
    substitute_steps,
)
from .series import InsufficientTruncation, build

MAX_SEQ_N = 14
MAX_SEMILENGTH = 12
MAX_SERIES_X = 24


class UsageError(Exception):
    pass


def _cap(value: int, cap: int, what: str, force: bool) -> None:
    if value > cap and not force:
        raise UsageError(f"{what} {value} exceeds the safety cap {cap}; pass --force to run anyway")


def _emit(args, payload, table_lines: Sequence[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload))
    else:
        for line in table_lines:
            print(line)


# -- subcommands ---------------------------------------------------------------

def cmd_count(args) -> int:
    pats = parse_patterns(args.patterns)
    _cap(args.n, MAX_SEQ_N, "length", args.force)
    group = [g for g in (args.group_by or "").split(",") if g]
    for g in group:
        if g not in ("dist", "rank"):
            raise UsageError(f"cannot group by {g!r}; use dist and/or rank")
    if "rank" in group and (1, 0, 2) not in pats:
        raise UsageError("grouping by rank requires the pattern 102")
    table = count_table(args.n, pats, workers=args.threads, n_min=args.n)
    keep = ["n"] + [{"dist": "m", "rank": "t"}[g] for g in group]
    sub = CountTable(tuple(keep))
    for (n, m, t), c in table.counts.items():
        if n == args.n:
            key = {"n": n, "m": m, "t": t}
            sub.add(tuple(key[a] for a in keep), c)
    lines = []
    if not group:
        lines.append(f"n={args.n}: {sub.get(n=args.n)}")
    for key, c in sub.items():
        if group:
            lines.append(": ".join([", ".join(f"{a}={v}" for a, v in zip(keep[1:], key[1:])), str(c)]))
    _emit(args, sub.to_records(), lines)
    return 0


def cmd_enumerate(args) -> int:
    pats = parse_patterns(args.patterns)
    _cap(args.n, MAX_SEQ_N, "length", args.force)
    out = []
    for k, e in enumerate(enumerate_avoiding(args.n, pats, dist=args.dist, rank=args.rank)):
        if args.limit is not None and k >= args.limit:
            break
        out.append(list(e))
    _emit(args, out, [json.dumps(e) for e in out])
    return 0


def cmd_paths(args) -> int:
    _cap(args.semilength, MAX_SEMILENGTH, "semilength", args.force)
    try:
        paths = list(enumerate_paths(args.kind, args.semilength, height=args.height, ud=args.ud, cls=args.cls))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        print(json.dumps([json.loads(path_to_json(p)) for p in paths]))
    else:
        for p in paths:
            print(path_to_json(p))
        print(f"# {len(paths)} paths")
    return 0


def cmd_eta(args) -> int:
    try:
        steps = steps_from_json(sys.stdin.read())
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"invalid path JSON: {exc}") from exc
    labeled = bool(steps) and isinstance(steps[0], FStep)
    if args.direction == "forward":
        if steps and not labeled:
            raise UsageError("forward direction expects labeled steps")
        make, convert, out_type = LabeledFPath, substitute_steps, WeightedHWalk
    else:
        if labeled:
            raise UsageError("inverse direction expects weighted steps")
        make, convert, out_type = WeightedHWalk, absorb_steps, LabeledFPath
    try:
        make(steps)
    except ValueError as exc:
        # the substitution is local to each step, so it is still applied
        print(f"invseq-lab: warning: input is not a valid path ({exc}); converting step-wise", file=sys.stderr)
    try:
        result = convert(steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(json.dumps({"steps": [step_to_dict(s) for s in result]}))
    return 0


def cmd_series(args) -> int:
    _cap(args.max_x, MAX_SERIES_X, "x bound", args.force)
    bounds = (args.max_x, args.max_y, args.max_z)
    s = build(bounds)[args.emit]
    if args.coeff:
        try:
            exps = tuple(int(v) for v in args.coeff.split(","))
        except ValueError as exc:
            raise UsageError(f"bad --coeff {args.coeff!r}") from exc
        if len(exps) != 3:
            raise UsageError("--coeff takes n,m,t")
        try:
            c = s[exps]
        except InsufficientTruncation as exc:
            raise UsageError(f"{exc}; certified bounds of {args.emit} are {s.bounds}") from exc
        _emit(args, {"x": exps[0], "y": exps[1], "z": exps[2], "c": str(c)}, [str(c)])
        return 0
    records = s.to_records()
    _emit(args, records, [f"x^{r['x']} y^{r['y']} z^{r['z']}: {r['c']}" for r in records])
    return 0


FORMULAS = {
    "b": (formulas.b_closed, 2),
    "dist": (formulas.count_dist_closed, 2),
    "fuss3": (formulas.fuss3, 1),
    "dist-rank": (formulas.dist_rank_count, 2),
    "dist-total": (formulas.dist_total, 1),
}


def cmd_formula(args) -> int:
    fn, arity = FORMULAS[args.which]
    try:
        vals = [int(v) for v in args.args.split(",")] if args.args else []
    except ValueError as exc:
        raise UsageError(f"bad --args {args.args!r}") from exc
    if len(vals) != arity:
        raise UsageError(f"{args.which} takes {arity} argument(s)")
    try:
        value = fn(*vals)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, {"which": args.which, "args": vals, "value": str(value)}, [str(value)])
    return 0


def cmd_verify(args) -> int:
    if args.suite == "all":
        report = verify.verify_all(offline=args.offline, workers=args.threads)
    elif args.suite == "table1":
        report = verify.verify_table1(n_max=args.max_n or 16, workers=args.threads)
    elif args.suite == "bijections":
        report = verify.verify_bijections(n_max=args.max_n or 9)
    elif args.suite == "oeis":
        report = verify.verify_oeis(offline=args.offline)
    else:
        report = verify.SUITES[args.suite]()
    if args.output:
        with open(args.output, "w") as f:
            f.write(report.to_json(timings=not args.no_timings) + "\n")
    if args.format == "json":
        print(report.to_json(timings=not args.no_timings))
    else:
        for line in report.lines():
            print(line)
        passed = sum(c.passed for c in report.checks)
        print(f"{passed}/{len(report.checks)} checks passed")
    return 0 if report.ok else 1


def cmd_oeis(args) -> int:
    try:
        seq = oeis.fetch(args.id, offline=args.offline)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except oeis.OEISError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    entries = seq.entries[: args.terms] if args.terms else seq.entries
    _emit(args, [{"i": i, "v": str(v)} for i, v in entries], [f"{i} {v}" for i, v in entries])
    return 0


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--force", action="store_true", help="lift safety caps")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    p = argparse.ArgumentParser(prog="invseq-lab", description="(102,000)-avoiding inversion sequence workbench")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common], help="count avoiders of length n")
    c.add_argument("--patterns", required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--group-by", default="")
    c.set_defaults(func=cmd_count)

    e = sub.add_parser("enumerate", parents=[common], help="list avoiders of length n")
    e.add_argument("--patterns", required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--dist", type=int)
    e.add_argument("--rank", type=int)
    e.add_argument("--limit", type=int)
    e.set_defaults(func=cmd_enumerate)

    pa = sub.add_parser("paths", parents=[common], help="list lattice paths")
    pa.add_argument("--kind", choices=KINDS, required=True)
    pa.add_argument("--semilength", type=int, required=True)
    pa.add_argument("--height", type=int)
    pa.add_argument("--ud", type=int)
    pa.add_argument("--class", dest="cls", choices=CLASSES)
    pa.set_defaults(func=cmd_paths)

    et = sub.add_parser("eta", parents=[common], help="apply eta or its inverse to a JSON path on stdin")
    et.add_argument("--direction", choices=("forward", "inverse"), required=True)
    et.set_defaults(func=cmd_eta)

    se = sub.add_parser("series", parents=[common], help="series coefficients")
    se.add_argument("--emit", choices=("B", "A", "D0", "D", "E", "g", "G", "G0", "F", "b"), required=True)
    se.add_argument("--max-x", type=int, default=17)
    se.add_argument("--max-y", type=int, default=9)
    se.add_argument("--max-z", type=int, default=9)
    se.add_argument("--coeff", help="n,m,t")
    se.set_defaults(func=cmd_series)

    fo = sub.add_parser("formula", parents=[common], help="evaluate a closed form")
    fo.add_argument("--which", choices=tuple(FORMULAS), required=True)
    fo.add_argument("--args", default="", help="comma separated integers")
    fo.set_defaults(func=cmd_formula)

    ve = sub.add_parser("verify", parents=[common], help="run verification suites")
    ve.add_argument("suite", choices=("table1", "bijections", "minpoly", "identities", "oeis", "all"))
    ve.add_argument("--offline", action="store_true")
    ve.add_argument("--max-n", type=int)
    ve.add_argument("--output", help="also write the JSON report here")
    ve.add_argument("--no-timings", action="store_true", help="omit elapsed fields")
    ve.set_defaults(func=cmd_verify)

    oe = sub.add_parser("oeis", parents=[common], help="show an OEIS b-file")
    oe.add_argument("--id", required=True)
    oe.add_argument("--terms", type=int)
    oe.add_argument("--offline", action="store_true")
    oe.set_defaults(func=cmd_oeis)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"invseq-lab: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invseq-lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
