"""Command-line entry point: ``splitconv {verify,cost,bench,plan}``.

Exit codes: 0 success, 1 verification or feasibility failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import math
import sys

import numpy as np

from . import costmodel
from .bench import bench_layer, vgg16_layers
from .engines import FFT_ENGINES, EngineKind, convolve
from .grid import ConvMode, Operation, Padding, direct_conv2d, max_abs_diff
from .planner import InfeasiblePlan, PlanRequest, choose_patch_size

MODES = [ConvMode(p, o) for p in Padding for o in Operation]


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(f"expected positive integers, got {text!r}")
    return values


def _engine_list(text: str) -> list[EngineKind]:
    try:
        return [EngineKind(v.strip().lower()) for v in text.split(",") if v.strip()]
    except ValueError:
        names = ",".join(e.value for e in EngineKind)
        raise argparse.ArgumentTypeError(f"engines must be drawn from {names}, got {text!r}")


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x)) if isinstance(x, float) else str(x)


def run_verify(n_values, k_values, s_values, seed=42, tolerance=1e-9, out=None,
               engines=None) -> int:
    """Check every FFT engine against the direct oracle over a size grid.

    ``engines`` maps a label to ``fn(x, w, mode, S) -> array``; by default it
    is the three FFT engines.
    """
    out = sys.stdout if out is None else out
    if engines is None:
        engines = {
            e.value: (lambda x, w, mode, S, e=e: convolve(x, w, e, mode, S)[0])
            for e in FFT_ENGINES
        }
    rng = np.random.default_rng(seed)
    failures = 0
    for n in n_values:
        for s in s_values:
            if s > n:
                print(f"SKIP N={n} S={s}: patch larger than input", file=out)
                continue
            for k in k_values:
                for mode in MODES:
                    try:
                        mode.check(k, n, n)
                    except ValueError as exc:
                        print(f"SKIP N={n} k={k} S={s} mode={mode}: {exc}", file=out)
                        continue
                    x = rng.uniform(-1, 1, (n, n))
                    w = rng.uniform(-1, 1, (k, k))
                    ref = direct_conv2d(x, w, mode)
                    for label, fn in engines.items():
                        try:
                            err = max_abs_diff(fn(x, w, mode, s), ref)
                        except Exception as exc:  # a broken engine is a failure, not a crash
                            err, note = math.inf, f" ({type(exc).__name__}: {exc})"
                        else:
                            note = ""
                        ok = err <= tolerance
                        failures += not ok
                        print(f"{'PASS' if ok else 'FAIL'} N={n} k={k} S={s} mode={mode} "
                              f"engine={label} max_abs_err={err:.3e}{note}", file=out)
    print(f"# {failures} failure(s) at tolerance {tolerance:g}", file=out)
    return 1 if failures else 0


def run_cost(n, k_values, s_values, out=None) -> int:
    out = sys.stdout if out is None else out
    k_last = k_values[-1]
    out.write("# operation counts from the closed-form overlap-add and split formulas; "
              "log base 2, real-valued patch counts\n")
    for method, note in costmodel.asymptotic_costs(n, k_last, s_values[0]).items():
        out.write(f"# {method.value}: {note}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["method", "N", "K", "S", "mults", "adds", "total"])
    for row in costmodel.sweep(n, k_values, s_values):
        writer.writerow([row.method.name, row.N, row.k, _fmt(row.s),
                         _fmt(row.mults), _fmt(row.adds), _fmt(row.total)])
    return 0


def run_bench(engines, S=8, repeats=3, scale=0.125, seed=42, max_err=1e-8, out=None) -> int:
    out = sys.stdout if out is None else out
    rng = np.random.default_rng(seed)
    out.write("# host wall-clock timings, median of repeats after one warm-up; "
              "correctness is checked, speed ordering is not asserted\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["layer", "engine", "H", "W", "Cin", "Cout", "K", "S",
                     "wall_ns_median", "max_abs_err"])
    status = 0
    for layer in vgg16_layers():
        shape = layer.scaled(scale)
        for rec in bench_layer(shape, engines, S, repeats, rng):
            if rec.error:
                status = 1
                out.write(f"# error {layer.name} {rec.engine.value}: {rec.error}\n")
            elif rec.max_abs_err_vs_direct > max_err:
                status = 1
            writer.writerow([layer.name, rec.engine.value, shape.H, shape.W, shape.C_in,
                             shape.C_out, shape.k, _fmt(rec.S), rec.wall_time_ns,
                             _fmt(rec.max_abs_err_vs_direct)])
    return status


def run_plan(n, k, budget, candidates, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        result = choose_patch_size(PlanRequest(n, k, budget, tuple(candidates)))
    except InfeasiblePlan as exc:
        print(f"infeasible: {exc}", file=out)
        return 1
    out.write("# objective: modeled split mults + adds (this tool's selection rule); "
              "budget in complex elements of one patch transform\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["S", "feasible", "workspace", "modeled_total"])
    for c in result.per_candidate:
        writer.writerow([c.S, str(c.feasible).lower(), c.workspace, _fmt(c.modeled_total)])
    out.write(f"chosen_S={result.chosen_S}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--tolerance", type=float, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="splitconv", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=42, help="RNG seed (default 42)")
    parser.add_argument("--tolerance", type=float, default=1e-9,
                        help="max-abs tolerance for verify (default 1e-9)")
    parser.add_argument("--out", default="-", help="output path (default stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check FFT engines against direct convolution")
    p.add_argument("--n", type=_int_list, default=[8, 16, 32, 64])
    p.add_argument("--k", type=_int_list, default=[1, 3, 5, 7])
    p.add_argument("--s", type=_int_list, default=[4, 8, 16, 32])

    p = sub.add_parser("cost", parents=[common], help="modeled operation counts (CSV)")
    p.add_argument("--n", type=int, default=224)
    p.add_argument("--kmin", type=int, default=3)
    p.add_argument("--kmax", type=int, default=11)
    p.add_argument("--kstep", type=int, default=2)
    p.add_argument("--s", type=_int_list, default=[16, 32])

    p = sub.add_parser("bench", parents=[common], help="time engines on VGG16 layer shapes (CSV)")
    p.add_argument("--engines", type=_engine_list, default=list(EngineKind))
    p.add_argument("--s", type=int, default=8)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--scale", type=float, default=0.125)
    p.add_argument("--max-err", type=float, default=1e-8)

    p = sub.add_parser("plan", parents=[common], help="choose a patch size under a workspace budget")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int, default=None, help="complex elements (default unlimited)")
    p.add_argument("--candidates", type=_int_list, default=[4, 8, 16, 32, 64])
    return parser


def _dispatch(args, parser, out) -> int:
    if args.command == "verify":
        return run_verify(args.n, args.k, args.s, args.seed, args.tolerance, out)
    if args.command == "cost":
        if args.n < 1 or args.kmin < 1 or args.kstep < 1 or args.kmax < args.kmin:
            parser.error("cost needs --n >= 1, 1 <= --kmin <= --kmax and --kstep >= 1")
        ks = list(range(args.kmin, args.kmax + 1, args.kstep))
        return run_cost(args.n, ks, args.s, out)
    if args.command == "bench":
        if args.repeats < 1 or not 0 < args.scale <= 1 or args.s < 1 or not args.engines:
            parser.error("bench needs --repeats >= 1, 0 < --scale <= 1, --s >= 1 and engines")
        return run_bench(args.engines, args.s, args.repeats, args.scale, args.seed,
                         args.max_err, out)
    if args.n < 1 or args.k < 1:
        parser.error("plan needs --n >= 1 and --k >= 1")
    budget = math.inf if args.budget is None else args.budget
    return run_plan(args.n, args.k, budget, args.candidates, out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.out == "-":
        return _dispatch(args, parser, sys.stdout)
    with contextlib.ExitStack() as stack:
        out = stack.enter_context(open(args.out, "w", newline=""))
        return _dispatch(args, parser, out)


if __name__ == "__main__":
    sys.exit(main())
