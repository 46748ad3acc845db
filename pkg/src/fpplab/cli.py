"""Command line interface.

Subcommands
-----------
hit              first-passage replicates to a directional target
grow             fixed-step growth replicates
variance-scan    per-scale variance and tightness diagnostics
shape            time-constant and growth-constant estimation
lemma2           deterministic inequality self-checks (exit 2 on violation)
strip            restricted growth next to free growth at the same scale
engines-compare  distributional agreement between engines (exit 2 on failure)
clt-check        normal approximation of conditional sums (exit 2 on failure)

Every command writes one table to --out (default stdout), CSV by default or
JSON with --format json.  CSV starts with '#' comment lines echoing the tool
version and the effective configuration in sorted key order; floats are
printed with %.17g so values round-trip exactly.  Progress and diagnostics
go to stderr only, so piping stdout always yields a clean table.

Output bytes depend only on the command line, never on --workers or --out.

Exit status: 0 on success, 1 on usage or resource errors, 2 when a check
command detects a violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from ._kernels import kahan_cumsum
from .analysis import (
    SampleSet,
    abel_summation_gap,
    bootstrap_variance_growth,
    clt_conditional_check,
    estimate_time_constant,
    fit_scaling,
    ks_two_sample,
    lemma2_check,
    q_sequence,
    tightness_scan,
)
from .engines import (
    ResourceLimitError,
    SimConfig,
    farm_replicates,
    run,
)
from .rng import (
    BASELINE_BAND,
    BOOTSTRAP_BAND,
    COMPARE_BANDS,
    FUZZ_BAND,
    REPLICATE_BAND,
    RESAMPLE_BAND,
    derive_stream,
)

HIT_COLUMNS = ("command", "seed", "engine", "n", "replicate",
               "T", "M_n", "mu_Mn", "sigma2_Mn")
SCAN_COLUMNS = ("n", "mean_T", "var_T", "median_T", "max_window_mass",
                "c1_hat", "c2_hat", "lemma1_ratio_p5")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; 2 is reserved for failed
    # checks here, so force usage errors onto exit code 1
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_direction(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"direction must be 'dx,dy', got {text!r}")
    try:
        dx, dy = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"direction components must be numbers, got {text!r}")
    return (dx, dy)


def _parse_scales(text: str) -> tuple:
    try:
        scales = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"scales must be comma-separated integers, got {text!r}")
    if not scales or any(s < 2 for s in scales):
        raise argparse.ArgumentTypeError("every scale must be an integer >= 2")
    if len(set(scales)) != len(scales) or list(scales) != sorted(scales):
        raise argparse.ArgumentTypeError("scales must be strictly increasing")
    return scales


def _add_io_flags(p) -> None:
    p.add_argument("--seed", type=int, default=1,
                   help="master seed; all randomness derives from it (default 1)")
    p.add_argument("--out", default=None, metavar="FILE",
                   help="write the table here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="table format (default csv)")
    p.add_argument("--workers", type=int, default=0,
                   help="processes for replicate farming; 0 means one per cpu."
                        " Output is identical for any value.")


def _add_run_flags(p, replicates=1000) -> None:
    p.add_argument("--replicates", type=int, default=replicates,
                   help=f"independent replicates (default {replicates})")
    p.add_argument("--direction", type=_parse_direction, default=(1.0, 0.0),
                   metavar="DX,DY",
                   help="target direction as decimals, normalized internally"
                        " (default 1,0)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fpplab",
                     description="growth-cluster passage-time experiments")
    parser.add_argument("--version", action="version",
                        version=f"fpplab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="COMMAND")

    p = sub.add_parser("hit", help="first-passage replicates to round(n*direction)")
    p.add_argument("--n", type=int, required=True,
                   help="scale: the target is the integer part of n*direction")
    p.add_argument("--engine", choices=("eden", "dijkstra", "richardson"),
                   default="eden")
    p.add_argument("--clock", choices=("exponential", "uniform", "deterministic"),
                   default="exponential",
                   help="richardson only; others require exponential")
    p.add_argument("--retain-trace", action="store_true",
                   help="save the growth trace next to --out (single replicate only)")
    _add_run_flags(p)
    _add_io_flags(p)
    p.set_defaults(handler=_cmd_hit_grow, mode="hit")

    p = sub.add_parser("grow", help="growth replicates stopped after n additions")
    p.add_argument("--n", type=int, required=True, help="number of additions")
    p.add_argument("--engine", choices=("eden", "dijkstra", "richardson"),
                   default="eden")
    p.add_argument("--clock", choices=("exponential", "uniform", "deterministic"),
                   default="exponential",
                   help="richardson only; others require exponential")
    p.add_argument("--retain-trace", action="store_true",
                   help="save the growth trace next to --out (single replicate only)")
    _add_run_flags(p)
    _add_io_flags(p)
    p.set_defaults(handler=_cmd_hit_grow, mode="grow")

    p = sub.add_parser("variance-scan",
                       help="passage-time spread and tightness across scales")
    p.add_argument("--scales", type=_parse_scales, required=True,
                   metavar="N1,N2,...", help="strictly increasing scales")
    p.add_argument("--engine", choices=("eden", "dijkstra"), default="eden")
    p.add_argument("--window", type=float, default=0.5,
                   help="interval width for the concentration diagnostic"
                        " (default 0.5)")
    _add_run_flags(p)
    _add_io_flags(p)
    p.set_defaults(handler=_cmd_variance_scan)

    p = sub.add_parser("shape",
                       help="estimate the linear time constant and the"
                            " quadratic growth constant")
    p.add_argument("--scales", type=_parse_scales, default=(50, 100, 200),
                   metavar="N1,N2,...",
                   help="hit scales for the time constant (default 50,100,200)")
    p.add_argument("--n", type=int, default=20000,
                   help="additions per growth run for the growth constant"
                        " (default 20000)")
    p.add_argument("--engine", choices=("eden", "dijkstra"), default="eden")
    _add_run_flags(p)
    _add_io_flags(p)
    p.set_defaults(handler=_cmd_shape)

    p = sub.add_parser("lemma2",
                       help="self-check the square-sum lower bound and the"
                            " summation-by-parts identity")
    p.add_argument("--fuzz", type=int, default=10000,
                   help="random constrained sequences to test (default 10000)")
    _add_io_flags(p)
    p.set_defaults(handler=_cmd_lemma2)

    p = sub.add_parser("strip",
                       help="growth restricted to a strip around the target"
                            " ray, next to free growth")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True,
                   help="strip width exponent: width = strip-constant * n^alpha")
    p.add_argument("--strip-constant", type=float, default=2.0,
                   help="width prefactor (default 2.0)")
    p.add_argument("--engine", choices=("eden", "dijkstra"), default="eden")
    _add_run_flags(p)
    _add_io_flags(p)
    p.set_defaults(handler=_cmd_strip)

    p = sub.add_parser("engines-compare",
                       help="two-sample agreement of passage times across"
                            " engines")
    p.add_argument("--n", type=int, required=True)
    _add_run_flags(p)
    _add_io_flags(p)
    p.set_defaults(handler=_cmd_engines_compare)

    p = sub.add_parser("clt-check",
                       help="normal approximation of sums of exponentials"
                            " conditioned on one growth history")
    p.add_argument("--n", type=int, default=10000,
                   help="additions in the conditioning growth run (default 10000)")
    p.add_argument("--replicates", type=int, default=1000,
                   help="resampled sums (default 1000)")
    _add_io_flags(p)
    p.set_defaults(handler=_cmd_clt_check)

    return parser


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _native(v):
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _format_value(v) -> str:
    v = _native(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def emit_table(args, meta: dict, columns, rows) -> None:
    """Write one table to --out (or stdout) in the selected format.

    CSV places the version and the sorted configuration echo on '#' lines
    before the header row.  JSON carries the same information in a 'meta'
    object and mirrors columns as row fields.
    """
    rows = [[_native(v) for v in row] for row in rows]
    if args.format == "csv":
        lines = [f"# fpplab {__version__}"]
        for key in sorted(meta):
            lines.append(f"# {key}={_format_value(meta[key])}")
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_format_value(v) for v in row))
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "tool": "fpplab",
            "version": __version__,
            "meta": {k: _native(v) for k, v in meta.items()},
            "columns": list(columns),
            "rows": [dict(zip(columns, row)) for row in rows],
        }
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out and args.out != "-":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _progress(label: str, total: int):
    step = max(1, total // 10)
    def cb(done: int) -> None:
        if done == total or done % step == 0:
            _say(f"  [{label}] {done}/{total}")
    return cb


def _worker_count(args) -> int:
    if args.workers > 0:
        return args.workers
    return os.cpu_count() or 1


def _direction_echo(config: SimConfig) -> str:
    return "%.17g,%.17g" % config.direction


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------

def _cmd_hit_grow(args) -> int:
    config = SimConfig(n=args.n, direction=args.direction, engine=args.engine,
                       clock=args.clock, mode=args.mode,
                       master_seed=args.seed, replicates=args.replicates)
    meta = {
        "command": args.mode if args.mode == "grow" else "hit",
        "seed": args.seed, "n": args.n,
        "direction": _direction_echo(config),
        "engine": args.engine, "clock": args.clock,
        "mode": args.mode, "replicates": args.replicates,
    }
    if args.retain_trace:
        if args.replicates != 1:
            _say("error: --retain-trace needs --replicates 1"
                 " (traces hold one triple per addition)")
            return 1
        if not args.out or args.out == "-":
            _say("error: --retain-trace needs --out FILE for the trace archive")
            return 1
        result = run(config, derive_stream(args.seed, REPLICATE_BAND),
                     retain_trace=True)
        trace = result.trace
        trace_path = args.out + ".trace.npz"
        np.savez_compressed(trace_path, vx=trace.vx, vy=trace.vy,
                            times=trace.times, y_counts=trace.y_counts)
        _say(f"trace written to {trace_path}")
        data = np.asarray([[result.passage_time, float(result.hit_index),
                            result.mu_final, result.sigma_sq_final]])
    else:
        data = farm_replicates(config, workers=_worker_count(args),
                               progress=_progress(meta["command"],
                                                  args.replicates))
    rows = [(meta["command"], args.seed, args.engine, args.n, r,
             data[r, 0], int(data[r, 1]), data[r, 2], data[r, 3])
            for r in range(data.shape[0])]
    emit_table(args, meta, HIT_COLUMNS, rows)
    return 0


def _scan_row(scale: int, data: np.ndarray, window: float) -> tuple:
    T = data[:, 0]
    M = data[:, 1]
    sig = data[:, 3]
    mean_T = float(np.mean(T))
    c1_hat = mean_T / scale
    # scale-level growth proxy: M ~ c2 * (c1*n)^2 once T ~ c1*n
    c2_hat = float(np.mean(M)) / (mean_T * mean_T)
    ratios = sig / np.log(M)
    return (scale, mean_T, float(np.var(T, ddof=1)), float(np.median(T)),
            tightness_scan(T, window), c1_hat, c2_hat,
            float(np.percentile(ratios, 5.0)))


def _cmd_variance_scan(args) -> int:
    meta = {
        "command": "variance-scan", "seed": args.seed,
        "scales": ",".join(str(s) for s in args.scales),
        "engine": args.engine, "window": args.window,
        "replicates": args.replicates, "direction": "",
    }
    rows = []
    samples_by_scale = {}
    for scale in args.scales:
        config = SimConfig(n=scale, direction=args.direction,
                           engine=args.engine, master_seed=args.seed,
                           replicates=args.replicates)
        meta["direction"] = _direction_echo(config)
        _say(f"scale {scale}: {args.replicates} replicates")
        data = farm_replicates(config, workers=_worker_count(args),
                               progress=_progress(f"n={scale}",
                                                  args.replicates))
        samples_by_scale[scale] = data[:, 0]
        rows.append(_scan_row(scale, data, args.window))
    if len(args.scales) >= 4:
        fit = fit_scaling([(s, float(np.var(samples_by_scale[s], ddof=1)))
                           for s in args.scales], model="log")
        boot_fit, lcb = bootstrap_variance_growth(
            samples_by_scale, derive_stream(args.seed, BOOTSTRAP_BAND))
        _say(f"var(T) vs log n: slope={fit.slope:.6g}"
             f" intercept={fit.intercept:.6g} rms={fit.residual_rms:.6g}")
        _say(f"bootstrap slope 5% lower bound: {lcb:.6g}"
             f" (point {boot_fit.slope:.6g})")
    else:
        _say("fit skipped: need at least 4 scales")
    emit_table(args, meta, SCAN_COLUMNS, rows)
    return 0


def _cmd_shape(args) -> int:
    meta = {
        "command": "shape", "seed": args.seed,
        "scales": ",".join(str(s) for s in args.scales),
        "n": args.n, "engine": args.engine,
        "replicates": args.replicates, "direction": "",
    }
    rows = []
    sample_sets = []
    for scale in args.scales:
        config = SimConfig(n=scale, direction=args.direction,
                           engine=args.engine, master_seed=args.seed,
                           replicates=args.replicates)
        meta["direction"] = _direction_echo(config)
        _say(f"hit scale {scale}: {args.replicates} replicates")
        data = farm_replicates(config, workers=_worker_count(args),
                               progress=_progress(f"n={scale}",
                                                  args.replicates))
        T, M, mu = data[:, 0], data[:, 1], data[:, 2]
        R = data.shape[0]
        sample_sets.append(SampleSet(values=T, n_label=scale))
        rows.append(("mean_T", scale, float(np.mean(T)),
                     float(np.std(T, ddof=1) / math.sqrt(R))))
        rows.append(("mean_M", scale, float(np.mean(M)),
                     float(np.std(M, ddof=1) / math.sqrt(R))))
        ratio = mu / np.sqrt(M)
        rows.append(("mu_over_sqrtM", scale, float(np.mean(ratio)),
                     float(np.std(ratio, ddof=1) / math.sqrt(R))))
    est = estimate_time_constant(sample_sets)
    rows.append(("c1_hat", max(args.scales), est.c1, est.stderr))
    # n=0 labels the extrapolated (infinite-scale) estimate
    rows.append(("c1_extrapolated", 0, est.c1_extrapolated, est.stderr))

    grow_reps = 32
    grow_config = SimConfig(n=args.n, engine=args.engine, mode="grow",
                            master_seed=args.seed, replicates=grow_reps)
    _say(f"grow runs: {grow_reps} x {args.n} additions")
    gdata = farm_replicates(grow_config, band=BASELINE_BAND,
                            workers=_worker_count(args),
                            progress=_progress("grow", grow_reps))
    c2_samples = args.n / (gdata[:, 0] ** 2)
    c2_hat = float(np.mean(c2_samples))
    c2_se = float(np.std(c2_samples, ddof=1) / math.sqrt(grow_reps))
    rows.append(("c2_hat", args.n, c2_hat, c2_se))
    rows.append(("c2_inv_sqrt", args.n, 1.0 / math.sqrt(c2_hat),
                 0.5 * c2_se * c2_hat ** -1.5))
    _say(f"c1={est.c1:.6g}+-{est.stderr:.2g}"
         f" (extrapolated {est.c1_extrapolated:.6g})  c2={c2_hat:.6g}+-{c2_se:.2g}")
    _say(f"consistency: mu/sqrt(M) should approach 1/sqrt(c2)"
         f" = {1.0 / math.sqrt(c2_hat):.6g}")
    emit_table(args, meta, ("quantity", "n", "value", "stderr"), rows)
    return 0


def _cmd_lemma2(args) -> int:
    meta = {"command": "lemma2", "seed": args.seed, "fuzz": args.fuzz}
    rows = []
    failed = False

    # cumulative square-sum of the root-increment sequence vs log(n)/4
    n_max = 1_000_000
    q = q_sequence(n_max)
    cum = kahan_cumsum(q * q)
    bound = np.log(np.arange(1, n_max + 1, dtype=np.float64)) / 4.0
    margins = cum - bound
    viol = int(np.sum(margins < -1e-12 * np.maximum(cum, 1.0)))
    rows.append(("prefix_bound", n_max, viol, float(np.min(margins))))
    failed = failed or viol > 0
    _say(f"prefix bound up to n={n_max}: {viol} violations,"
         f" worst margin {float(np.min(margins)):.6g}")

    # random constrained sequences: entries dominate a*q elementwise, so
    # prefix sums dominate a*sqrt(k) by construction; every 5th case is the
    # exact equality configuration x = a*q
    worst = math.inf
    viol = 0
    for i in range(args.fuzz):
        gen = derive_stream(args.seed, FUZZ_BAND + i).generator
        n = 2 + int(gen.integers(0, 399))
        a = math.exp(float(gen.uniform(-1.0, 1.0)))
        qs = q_sequence(n)
        if i % 5 == 0:
            xs = a * qs
        else:
            xs = a * qs * (1.0 + gen.exponential(1.0, n))
        res = lemma2_check(xs, a)
        rel = res.margin / res.sum_squares
        worst = min(worst, rel)
        if not res.holds:
            viol += 1
    rows.append(("fuzz_inequality", args.fuzz, viol, worst))
    failed = failed or viol > 0
    _say(f"fuzz inequality: {viol}/{args.fuzz} violations,"
         f" worst relative margin {worst:.6g}")

    # summation-by-parts identity on random sequences
    cases = 1000
    worst_gap = 0.0
    viol = 0
    for i in range(cases):
        gen = derive_stream(args.seed, FUZZ_BAND + args.fuzz + i).generator
        n = 2 + int(gen.integers(0, 499))
        a_seq = np.sort(gen.exponential(1.0, n))[::-1]
        b_seq = gen.exponential(1.0, n) if i % 2 == 0 else gen.normal(0.0, 1.0, n)
        gap = abel_summation_gap(a_seq, b_seq)
        worst_gap = max(worst_gap, gap)
        if gap > 1e-10:
            viol += 1
    rows.append(("abel_identity", cases, viol, worst_gap))
    failed = failed or viol > 0
    _say(f"summation by parts: {viol}/{cases} beyond 1e-10,"
         f" worst gap {worst_gap:.3g}")

    emit_table(args, meta,
               ("check", "cases", "violations", "worst"), rows)
    return 2 if failed else 0


def _cmd_strip(args) -> int:
    strip_config = SimConfig(n=args.n, direction=args.direction,
                             engine=args.engine, master_seed=args.seed,
                             replicates=args.replicates,
                             strip_alpha=args.alpha,
                             strip_constant=args.strip_constant)
    strip_config.strip_region()  # fail fast if the strip is too narrow
    free_config = SimConfig(n=args.n, direction=args.direction,
                            engine=args.engine, master_seed=args.seed,
                            replicates=args.replicates)
    meta = {
        "command": "strip", "seed": args.seed, "n": args.n,
        "direction": _direction_echo(strip_config),
        "engine": args.engine, "alpha": args.alpha,
        "strip_constant": args.strip_constant,
        "half_width": strip_config.half_width(),
        "replicates": args.replicates,
    }
    _say(f"strip runs: half width {strip_config.half_width():.6g}")
    sdata = farm_replicates(strip_config, workers=_worker_count(args),
                            progress=_progress("strip", args.replicates))
    _say("free runs")
    fdata = farm_replicates(free_config, band=BASELINE_BAND,
                            workers=_worker_count(args),
                            progress=_progress("free", args.replicates))
    rows = []
    for label, data in (("strip", sdata), ("free", fdata)):
        for r in range(data.shape[0]):
            rows.append((label, args.seed, args.engine, args.n, r,
                         data[r, 0], int(data[r, 1]), data[r, 2], data[r, 3]))

    ks = ks_two_sample(sdata[:, 0], fdata[:, 0])
    # second-moment floor: sum(1/Y^2) * M >= (sum 1/Y)^2 per replicate
    floor_viol = int(np.sum(sdata[:, 3] * sdata[:, 1] <
                            sdata[:, 2] ** 2 * (1.0 - 1e-12)))
    _say(f"T distribution strip vs free: KS={ks.statistic:.6g}"
         f" threshold={ks.threshold:.6g}"
         f" {'indistinguishable' if ks.passed else 'distinguishable'}")
    _say(f"mean T strip/free: {np.mean(sdata[:, 0]) / np.mean(fdata[:, 0]):.6g}"
         f"  mean M strip/free: {np.mean(sdata[:, 1]) / np.mean(fdata[:, 1]):.6g}")
    _say(f"second-moment floor violations: {floor_viol}/{args.replicates}")
    emit_table(args, meta, HIT_COLUMNS, rows)
    return 0


def _cmd_engines_compare(args) -> int:
    meta = {
        "command": "engines-compare", "seed": args.seed, "n": args.n,
        "direction": "", "clock": "exponential",
        "replicates": args.replicates,
    }
    samples = {}
    for engine in ("eden", "dijkstra", "richardson"):
        config = SimConfig(n=args.n, direction=args.direction, engine=engine,
                           master_seed=args.seed, replicates=args.replicates)
        meta["direction"] = _direction_echo(config)
        _say(f"{engine}: {args.replicates} replicates")
        data = farm_replicates(config, band=COMPARE_BANDS[engine],
                               workers=_worker_count(args),
                               progress=_progress(engine, args.replicates))
        samples[engine] = data[:, 0]
    rows = []
    failed = False
    for left, right in (("eden", "dijkstra"), ("eden", "richardson"),
                        ("dijkstra", "richardson")):
        ks = ks_two_sample(samples[left], samples[right])
        rows.append((f"{left}:{right}", args.seed, args.n, args.replicates,
                     ks.statistic, ks.threshold, ks.passed))
        failed = failed or not ks.passed
        _say(f"{left} vs {right}: KS={ks.statistic:.6g}"
             f" threshold={ks.threshold:.6g}"
             f" {'ok' if ks.passed else 'MISMATCH'}")
    emit_table(args, meta,
               ("pair", "seed", "n", "replicates",
                "ks_statistic", "ks_threshold", "passed"), rows)
    return 2 if failed else 0


def _cmd_clt_check(args) -> int:
    meta = {"command": "clt-check", "seed": args.seed, "n": args.n,
            "replicates": args.replicates}
    config = SimConfig(n=args.n, mode="grow", master_seed=args.seed,
                       replicates=1)
    _say(f"conditioning growth run: {args.n} additions")
    result = run(config, derive_stream(args.seed, REPLICATE_BAND),
                 retain_trace=True)
    _say(f"resampling {args.replicates} conditional sums")
    ks = clt_conditional_check(result.trace.y_counts, args.replicates,
                               derive_stream(args.seed, RESAMPLE_BAND))
    rows = [("clt-check", args.seed, args.n, args.replicates,
             ks.statistic, ks.threshold, ks.passed)]
    _say(f"KS against the normal limit: {ks.statistic:.6g}"
         f" threshold={ks.threshold:.6g} {'ok' if ks.passed else 'FAIL'}")
    emit_table(args, meta,
               ("command", "seed", "n", "resamples",
                "ks_statistic", "ks_threshold", "passed"), rows)
    return 0 if ks.passed else 2


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ResourceLimitError as exc:
        _say(f"fpplab: resource limit: {exc}")
        return 1
    except ValueError as exc:
        _say(f"fpplab: error: {exc}")
        return 1
    except OSError as exc:
        _say(f"fpplab: io error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
