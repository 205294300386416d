"""Command-line front end.

Exit codes: 0 success, 1 validation check failed, 2 bad flags,
3 runtime or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .core import ObjectiveId
from .exceptions import SliceOptError
from .objectives import contour_grid, get_spec
from .runner import ExperimentConfig, RunResult, run_chain, run_sweep

log = logging.getLogger("sliceopt")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3
FUNCTIONS = [o.value for o in ObjectiveId]
TRACE_HEADER = "iter,phase,x1,x2,f\n"


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def kappa_label(kappa: float) -> str:
    s = repr(float(kappa))
    return s[:-2] if s.endswith(".0") else s


def write_trace_csv(trace, path) -> None:
    lines = [TRACE_HEADER]
    for e in trace.entries():
        lines.append(f"{e.iter},{e.phase},{fmt(e.point.x1)},{fmt(e.point.x2)},{fmt(e.f)}\n")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("".join(lines))


def summary_dict(result: RunResult) -> dict:
    cfg = result.config
    (bx1, bx2), bf = result.best
    return {
        "function": result.objective.value,
        "kappa": result.kappa,
        "iterations": int(cfg.iterations),
        "burnin": int(cfg.burnin),
        "seed": int(cfg.seed),
        "start": list(cfg.start_point),
        "best_x1": bx1,
        "best_x2": bx2,
        "best_f": bf,
        "mean_x1": result.ergodic_mean.x1,
        "mean_x2": result.ergodic_mean.x2,
        "occupancy": list(result.occupancy.fractions) if result.occupancy is not None else None,
        "empty_slice_repairs": result.diagnostics.empty_slice_repairs,
        "tail_fallbacks": result.diagnostics.tail_fallbacks,
    }


def write_json(obj, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(json.dumps(obj, indent=2) + "\n")


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and v < float("inf")):
        raise argparse.ArgumentTypeError(f"must be a finite positive number: {text!r}")
    return v


def _kappa_list(text):
    return [_positive_float(t) for t in text.split(",") if t.strip()]


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _seed(text):
    v = _nonneg_int(text)
    if v >= 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits: {text!r}")
    return v


def _floats(n):
    def parse(text):
        try:
            vals = [float(t) for t in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers: {text!r}") from None
        if len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers: {text!r}")
        return tuple(vals)
    return parse


def _add_chain_flags(p, kappa_required=True):
    p.add_argument("--function", required=True, choices=FUNCTIONS)
    if kappa_required:
        p.add_argument("--kappa", required=True, type=_positive_float)
    p.add_argument("--iters", type=_nonneg_int, default=1000)
    p.add_argument("--burnin", type=_nonneg_int, default=100)
    p.add_argument("--seed", type=_seed, default=42)
    p.add_argument("--start", type=_floats(2), default=None,
                   help="x1,x2 (write --start=-1,1 for negative values)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sliceopt",
                                     description="Global minimisation by slice sampling Boltzmann densities.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one slice-sampling chain")
    _add_chain_flags(p)
    p.add_argument("--trace")
    p.add_argument("--summary")

    p = sub.add_parser("sweep", help="one chain per energy level")
    _add_chain_flags(p, kappa_required=False)
    p.add_argument("--kappas", type=_kappa_list, default=None)
    p.add_argument("--outdir", required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("contour", help="export an objective on a grid")
    p.add_argument("--function", required=True, choices=FUNCTIONS)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--box", type=_floats(4), default=None, help="x1_lo,x1_hi,x2_lo,x2_hi")
    p.add_argument("--out", required=True)

    p = sub.add_parser("validate", help="run an invariant suite")
    p.add_argument("--suite", required=True, choices=["trunc", "grid-tv", "membership", "booth"])
    p.add_argument("--seed", type=_seed, default=42)

    p = sub.add_parser("baseline", help="run the random-walk Metropolis baseline")
    _add_chain_flags(p)
    p.add_argument("--sigma", required=True, type=_positive_float)
    p.add_argument("--trace")
    p.add_argument("--summary")
    return parser


def _config(args, kappas, sampler="slice", sigma=0.5):
    return ExperimentConfig(args.function, tuple(kappas), args.iters, args.burnin, args.seed,
                            args.start, sampler, sigma)


def _write_run(result, trace_path, summary_path):
    write_trace_csv(result.trace, trace_path)
    write_json(summary_dict(result), summary_path)
    log.info("wrote %s and %s", trace_path, summary_path)


def cmd_run(args) -> int:
    result = run_chain(_config(args, [args.kappa]))
    stem = f"{args.function}_kappa{kappa_label(args.kappa)}"
    _write_run(result, args.trace or stem + ".csv", args.summary or stem + ".json")
    return EXIT_OK


def cmd_baseline(args) -> int:
    result = run_chain(_config(args, [args.kappa], "metropolis", args.sigma))
    stem = f"{args.function}_kappa{kappa_label(args.kappa)}_metropolis"
    _write_run(result, args.trace or stem + ".csv", args.summary or stem + ".json")
    return EXIT_OK


def cmd_sweep(args) -> int:
    kappas = args.kappas or list(get_spec(args.function).default_kappas)
    results = run_sweep(_config(args, kappas), n_jobs=args.jobs)
    os.makedirs(args.outdir, exist_ok=True)
    index = {"function": args.function, "seed": args.seed, "runs": []}
    for r in results:
        stem = f"{args.function}_kappa{kappa_label(r.kappa)}"
        _write_run(r, os.path.join(args.outdir, stem + ".csv"), os.path.join(args.outdir, stem + ".json"))
        (bx1, bx2), bf = r.best
        index["runs"].append({"kappa": r.kappa, "trace": stem + ".csv", "summary": stem + ".json",
                              "best_x1": bx1, "best_x2": bx2, "best_f": bf})
    write_json(index, os.path.join(args.outdir, "sweep_index.json"))
    return EXIT_OK


def cmd_contour(args) -> int:
    grid = contour_grid(args.function, args.box, args.n)
    lines = ["x1,x2,f\n"] + [f"{fmt(a)},{fmt(b)},{fmt(c)}\n" for a, b, c in grid.tolist()]
    with open(args.out, "w", encoding="ascii", newline="\n") as fh:
        fh.write("".join(lines))
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validation import SUITES

    report = SUITES[args.suite](seed=args.seed)
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "contour": cmd_contour,
    "validate": cmd_validate,
    "baseline": cmd_baseline,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (SliceOptError, ValueError, OSError) as exc:
        print(f"sliceopt: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def entry_point():
    sys.exit(main())
