"""``anorm`` command line: run job files, single pipelines and the self-test.

Exit codes: 0 all ok, 1 verification or certificate failure, 2 input error,
3 computation limit, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .corpus import run_selftest
from .exceptions import AnormError, InputError
from .expr_io import emit_report
from .jobs import RunConfig, Task, exit_code_for, load_job, run_tasks

SEED_ENV = "ANORM_SEED"


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", help="emit a json array of reports")
    p.add_argument("--seed", type=int, default=None, help=f"random seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--max-pairs", type=int, default=50_000, help="cap on critical pairs per basis")
    p.add_argument("--max-bits", type=int, default=10**6, help="cap on coefficient size in bits")
    p.add_argument("--tol", type=float, default=1e-6, help="residual tolerance for numeric fiber points")
    p.add_argument("--filter", default=None, help="only run tasks (or self-test cases) of this kind")
    p.add_argument("--out", type=Path, default=None, help="write reports to this file instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="anorm", description="Universal denominators, a-normalisations, "
                                     "Nullstellensatz certificates and growth exponents on algebraic sets.")
    parser.add_argument("--version", action="version", version=f"anorm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="run every task of a job file")
    run.add_argument("job", type=Path)
    run.add_argument("--write-certs", action="store_true", help="write certificate json files beside the job")

    den = sub.add_parser("denominator", parents=[common], help="universal denominator of a variety")
    den.add_argument("job", type=Path)
    den.add_argument("--variety")

    rep = sub.add_parser("represent", parents=[common], help="write a function as R / Q")
    rep.add_argument("job", type=Path)
    rep.add_argument("--function")

    norm = sub.add_parser("normalize", parents=[common], help="graph a-normalisation of a generator list")
    norm.add_argument("job", type=Path)
    norm.add_argument("--variety")
    norm.add_argument("--generators")

    null = sub.add_parser("nullsatz", parents=[common], help="run the job's nullsatz tasks")
    null.add_argument("job", type=Path)
    null.add_argument("--write-certs", action="store_true", help="write certificate json files beside the job")

    gro = sub.add_parser("growth", parents=[common], help="estimate a growth exponent")
    gro.add_argument("job", type=Path)
    gro.add_argument("--function")
    gro.add_argument("--rmin", type=float)
    gro.add_argument("--rmax", type=float)
    gro.add_argument("--decades", type=int)
    gro.add_argument("--samples", type=int)

    chk = sub.add_parser("check", parents=[common], help="run the job's check tasks")
    chk.add_argument("job", type=Path)
    chk.add_argument("--function")
    chk.add_argument("--generators")

    st = sub.add_parser("selftest", parents=[common], help="run the built-in golden corpus")
    st.add_argument("--golden", type=Path, default=None, help="alternative golden file")
    return parser


def resolve_seed(flag: Optional[int]) -> int:
    if flag is not None:
        return flag
    raw = os.environ.get(SEED_ENV)
    if raw is None or not raw.strip():
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _require(job, table, name, kind):
    if name not in getattr(job, table):
        raise InputError(f"no {kind} named {name!r} in {job.path}")


def _adhoc_tasks(args, job) -> Optional[List[Task]]:
    """Tasks built from selector flags, or None to use the job's own tasks."""
    cmd = args.command
    if cmd == "denominator" and args.variety:
        _require(job, "varieties", args.variety, "variety")
        return [Task("denominator", {"variety": args.variety, "seed": None}, 0, 1)]
    if cmd == "represent" and args.function:
        _require(job, "functions", args.function, "function")
        return [Task("represent", {"function": args.function, "variety": job.functions[args.function].variety.name},
                     0, 1)]
    if cmd == "normalize" and (args.variety or args.generators):
        if not args.generators:
            raise InputError("--generators is required with --variety")
        _require(job, "generators", args.generators, "generator list")
        on = job.generators[args.generators][0]
        if args.variety and args.variety != on:
            raise InputError(f"generators {args.generators!r} are declared on {on}, not {args.variety}")
        return [Task("normalize", {"variety": on, "generators": args.generators}, 0, 1)]
    if cmd == "growth" and args.function:
        _require(job, "functions", args.function, "function")
        params = {k: getattr(args, k) for k in ("rmin", "rmax", "decades", "samples") if getattr(args, k) is not None}
        return [Task("growth", {"function": args.function, "params": params}, 0, 1)]
    if cmd == "check" and (args.function or args.generators):
        if not (args.function and args.generators):
            raise InputError("--function and --generators go together")
        _require(job, "functions", args.function, "function")
        _require(job, "generators", args.generators, "generator list")
        return [Task("check", {"check": "prop52", "function": args.function, "generators": args.generators}, 0, 1)]
    return None


def _emit(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _execute(args) -> int:
    seed = resolve_seed(args.seed)
    mode = "json" if args.json else "text"
    if args.command == "selftest":
        reports = run_selftest(seed, args.filter, args.golden)
        if not reports:
            raise InputError(f"no self-test case matches {args.filter!r}")
        _emit(emit_report(reports, mode), args.out)
        for r in reports:
            if not r.ok:
                print(f"anorm: self-test case {r.task_id} failed: {'; '.join(r.diagnostics)}", file=sys.stderr)
        return 0 if all(r.ok for r in reports) else 1

    cfg = RunConfig(seed=seed, max_pairs=args.max_pairs, max_bits=args.max_bits, tol=args.tol,
                    task_filter=args.filter, write_certs=getattr(args, "write_certs", False))
    job = load_job(args.job)
    kinds = None
    if args.command != "run":
        adhoc = _adhoc_tasks(args, job)
        if adhoc is not None:
            job.tasks = adhoc
        kinds = [args.command]
        if not any(t.kind == args.command for t in job.tasks):
            raise InputError(f"{args.job} has no {args.command} tasks; name one with the selector flags")
    reports = run_tasks(job, cfg, kinds)
    _emit(emit_report(reports, mode), args.out)
    for r in reports:
        for d in r.diagnostics:
            if not r.ok:
                print(f"anorm: {r.task_id}: {d}", file=sys.stderr)
    return exit_code_for(reports)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _execute(args)
    except AnormError as exc:
        print(f"anorm: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
