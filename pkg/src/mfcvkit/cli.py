"""Command-line front end: generate, estimate, report, compare."""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .bitstream import ModulationError, QuantizerConfig, gain_sweep
from .io_pipeline import (FormatError, RunDocument, build_report, emit_plot_data, fmt,
                          load_recording_csv, read_run, save_recording_csv, write_report,
                          write_run)
from .mfcv import EstimationError, EstimatorConfig, compare_literature, estimate_series
from .signal_core import (DelayProfile, RecordingError, SamplingRate, SynthesisError,
                          synthesize)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be a positive integer")
    return v


def positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return v


def non_negative_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be non-negative")
    return v


def delay_profile(text: str) -> DelayProfile:
    """Parse ``constant:<d>`` or ``ramp:<d0>:<d1>``."""
    parts = text.split(":")
    try:
        if parts[0] == "constant" and len(parts) == 2:
            return DelayProfile.constant(float(parts[1]))
        if parts[0] == "ramp" and len(parts) == 3:
            return DelayProfile.ramp(float(parts[1]), float(parts[2]))
    except (ValueError, SynthesisError) as exc:
        raise argparse.ArgumentTypeError(f"bad delay profile {text!r}: {exc}") from None
    raise argparse.ArgumentTypeError(
        f"bad delay profile {text!r}; expected constant:<d> or ramp:<d0>:<d1>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfcvkit",
        description="Muscle-fiber conduction velocity from two-channel sEMG.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic recording CSV")
    g.add_argument("--duration", type=positive_float, required=True, help="seconds")
    g.add_argument("--rate", type=positive_float, default=2200.0, help="Hz")
    g.add_argument("--delay-profile", type=delay_profile, required=True,
                   help="constant:<d> or ramp:<d0>:<d1> (samples)")
    g.add_argument("--noise", type=non_negative_float, default=0.0, help="uniform noise amplitude (V)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)

    e = sub.add_parser("estimate", help="estimate MFCV from a recording CSV")
    e.add_argument("--input", required=True)
    e.add_argument("--distance", type=positive_float, default=0.025, help="electrode distance (m)")
    e.add_argument("--rate", type=positive_float, default=2200.0, help="Hz")
    e.add_argument("--gain-min", type=float, default=1.0)
    e.add_argument("--gain-max", type=float, default=1.5)
    e.add_argument("--gain-step", type=positive_float, default=0.1)
    e.add_argument("--window", type=positive_int, default=2200, help="samples per window")
    e.add_argument("--hop", type=positive_int, default=None, help="samples between windows (default: --window)")
    e.add_argument("--amp-min", type=non_negative_float, default=0.2, help="V")
    e.add_argument("--mfcv-max", type=positive_float, default=6.0, help="m/s")
    e.add_argument("--threshold", type=positive_float, default=0.2, help="base modulation threshold (V)")
    e.add_argument("--expected-sign", choices=("negative", "positive"), default="negative")
    e.add_argument("--plot", default=None, help="also write per-second plot CSV here")
    e.add_argument("--out", required=True, help="run JSON (estimates + series)")

    for name, help_text in (("report", "write the full text report for a run"),
                            ("compare", "compare a run against published MFCV values")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--series", required=True, help="run JSON written by estimate")
        p.add_argument("--out", required=(name == "report"))
    return parser


def cmd_generate(args) -> int:
    rec = synthesize(args.duration, SamplingRate(args.rate), args.delay_profile,
                     args.noise, args.seed)
    save_recording_csv(rec, args.out)
    print(f"wrote {len(rec)} samples to {args.out}")
    return EXIT_OK


def summary_line(series, n_evaluations: int) -> str:
    o = series.overall
    if o is None:
        stats = "mean=none sd=none"
    else:
        sd = o.sd_ms if o.sd_ms is not None else float("nan")
        stats = f"mean={o.mean_ms:.3f} sd={sd:.3f} ({o.mean_ms:.3f} ± {sd:.3f} m/s)"
    slope = ("slope=none" if series.trend_slope_ms_per_s is None
             else f"slope={series.trend_slope_ms_per_s:.6f}")
    n_valid = o.n_valid if o is not None else 0
    return f"{stats} {slope} valid={n_valid}/{n_evaluations}"


def cmd_estimate(args) -> int:
    try:
        gains = gain_sweep(args.gain_min, args.gain_max, args.gain_step)
        quantizer = QuantizerConfig(base_threshold_v=args.threshold)
    except ModulationError as exc:
        print(f"mfcvkit estimate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.window < 2:
        print("mfcvkit estimate: --window must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    config = EstimatorConfig(window_samples=args.window, hop_samples=args.hop or args.window,
                             gains=tuple(gains), quantizer=quantizer,
                             amplitude_min_v=args.amp_min, mfcv_max_ms=args.mfcv_max,
                             expected_sign=args.expected_sign)
    rec = load_recording_csv(args.input, SamplingRate(args.rate), args.distance)
    estimates, series = estimate_series(rec, config)
    run = RunDocument(config, rec.rate.hertz, rec.electrode_distance_m, len(rec),
                      tuple(estimates), series)
    write_run(run, args.out)
    if args.plot:
        emit_plot_data(estimates, series, args.plot)
    print(summary_line(series, len(estimates)))
    return EXIT_OK


def cmd_report(args) -> int:
    run = read_run(args.series)
    write_report(build_report(run), args.out)
    print(f"wrote report to {args.out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    run = read_run(args.series)
    comparison = compare_literature(run.series)
    o = comparison.overall
    lines = [f"overall mean={fmt(o.mean_ms)} sd={fmt(o.sd_ms)} "
             f"range={fmt(o.min_ms)}..{fmt(o.max_ms)} n={o.n_valid}"]
    for r in comparison.rows:
        lo, hi = r.interval_ms
        diff = "none" if r.mean_difference_ms is None else fmt(r.mean_difference_ms)
        lines.append(f"{r.label}: {r.verdict} [{fmt(lo)}, {fmt(hi)}] mean_diff={diff} "
                     f"range={'inside' if r.range_inside else 'outside'}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "estimate": cmd_estimate,
            "report": cmd_report, "compare": cmd_compare}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"mfcvkit {args.command}: no such file: {exc.filename}", file=sys.stderr)
    except (OSError, FormatError, RecordingError, SynthesisError, EstimationError,
            ModulationError) as exc:
        print(f"mfcvkit {args.command}: {exc}", file=sys.stderr)
    return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
