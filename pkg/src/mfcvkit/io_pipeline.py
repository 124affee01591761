"""File formats: recording CSV, run JSON, text report and plot CSV.

All numbers are written with 12 significant digits and nothing time-dependent
is ever written, so identical inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bitstream import ModulationGain
from .mfcv import (STATUSES, VALID, EstimatorConfig, LiteratureComparison, MfcvSeries,
                   OverallStats, SecondStats, WindowEstimate, compare_literature,
                   status_counts)
from .signal_core import SamplingRate, TwoChannelRecording, ensure_valid

RECORDING_HEADER = ["t", "chA", "chB"]
PLOT_HEADER = ["second", "mean_ms", "sd_ms", "n_valid"]
NUMBER_FORMAT = ".12g"


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class LiteratureEntry:
    label: str
    method: str
    interval_ms: Tuple[float, float]
    mean_ms: Optional[float]
    sd_ms: Optional[float]
    contraction_note: str

    def __post_init__(self):
        lo, hi = self.interval_ms
        if lo > hi:
            raise ValueError(f"{self.label}: interval low exceeds high")
        if self.mean_ms is not None and not lo <= self.mean_ms <= hi:
            raise ValueError(f"{self.label}: mean outside its interval")


# Published MFCV values for isometric biceps brachii contractions.
LITERATURE: Tuple[LiteratureEntry, ...] = (
    LiteratureEntry("Proposed", "cross-correlation with software bitstream",
                    (4.1, 5.5), 4.5, 0.6, "90 degrees elbow joint angle"),
    LiteratureEntry("Koutsos2016", "cross-correlation with bitstream ASICs",
                    (3.5, 5.6), 4.5, 0.8, "70% maximum voluntary contraction"),
    LiteratureEntry("Marco2017", "cross-correlation",
                    (3.0, 4.2), 4.1, 0.2, "60% maximum voluntary contraction"),
    LiteratureEntry("Xu2017", "zero-crossing delay-locked loop",
                    (2.6, 4.3), 3.3, 0.3, "80% maximum voluntary contraction"),
    LiteratureEntry("Ye2015", "cross-correlation",
                    (2.5, 4.9), 3.3, 0.7, "120 degrees elbow joint angle, 60% maximum contraction"),
    LiteratureEntry("Farina2004", "cross-correlation",
                    (3.1, 4.9), None, None, "50% maximum voluntary contraction"),
)


def fmt(x: Optional[float]) -> str:
    if x is None:
        return ""
    return format(float(x), NUMBER_FORMAT)


# recordings ----------------------------------------------------------------

def save_recording_csv(rec: TwoChannelRecording, path) -> None:
    hz = rec.rate.hertz
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(",".join(RECORDING_HEADER) + "\n")
        for k, (a, b) in enumerate(zip(rec.channel_a.tolist(), rec.channel_b.tolist())):
            f.write(f"{fmt(k / hz)},{fmt(a)},{fmt(b)}\n")


def load_recording_csv(path, rate: SamplingRate = SamplingRate(),
                       distance_m: float = 0.025) -> TwoChannelRecording:
    """Read a ``t,chA,chB`` CSV. Row numbers in errors are file line numbers."""
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != RECORDING_HEADER:
            raise FormatError(f"{path}: unexpected header {header!r}, want t,chA,chB")
        t, a, b = [], [], []
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise FormatError(f"{path}: row {line}: expected 3 cells, got {len(row)}")
            try:
                vals = [float(c) for c in row]
            except ValueError:
                raise FormatError(f"{path}: row {line}: non-numeric cell in {row!r}") from None
            if not all(math.isfinite(v) for v in vals):
                raise FormatError(f"{path}: row {line}: non-finite value")
            if t and vals[0] <= t[-1]:
                raise FormatError(f"{path}: row {line}: time is not monotone increasing")
            t.append(vals[0])
            a.append(vals[1])
            b.append(vals[2])
    if len(t) < 2:
        raise FormatError(f"{path}: need at least 2 data rows, got {len(t)}")
    return ensure_valid(TwoChannelRecording(np.array(a), np.array(b), rate, distance_m))


# run documents (estimates + series) ------------------------------------------

def _series_to_dict(series: MfcvSeries) -> dict:
    o = series.overall
    return {
        "per_second": [
            {"second": r.second_index, "mean_ms": r.mean_ms, "sd_ms": r.sd_ms,
             "n_valid": r.n_valid, "min_ms": r.min_ms, "max_ms": r.max_ms}
            for r in series.per_second
        ],
        "trend_slope_ms_per_s": series.trend_slope_ms_per_s,
        "trend_intercept_ms": series.trend_intercept_ms,
        "overall": None if o is None else {
            "min_ms": o.min_ms, "max_ms": o.max_ms, "mean_ms": o.mean_ms,
            "sd_ms": o.sd_ms, "n_valid": o.n_valid},
    }


def _series_from_dict(d: dict) -> MfcvSeries:
    rows = tuple(SecondStats(r["second"], r["mean_ms"], r["sd_ms"], r["n_valid"],
                             r.get("min_ms"), r.get("max_ms"))
                 for r in d["per_second"])
    o = d.get("overall")
    overall = None if o is None else OverallStats(
        o["min_ms"], o["max_ms"], o["mean_ms"], o["sd_ms"], o["n_valid"])
    return MfcvSeries(rows, d["trend_slope_ms_per_s"], d["trend_intercept_ms"], overall)


@dataclass(frozen=True)
class RunDocument:
    """Everything one ``estimate`` run produces, as stored on disk."""

    config: EstimatorConfig
    rate_hz: float
    distance_m: float
    n_samples: int
    estimates: Tuple[WindowEstimate, ...]
    series: MfcvSeries


def write_run(run: RunDocument, path) -> None:
    doc = {
        "recording": {"rate_hz": run.rate_hz, "distance_m": run.distance_m,
                      "n_samples": run.n_samples},
        "config": run.config.to_dict(),
        "estimates": [
            {"window": e.window_index, "time_s": e.time_s, "gain": e.gain.value,
             "delta_t_samples": e.delta_t_samples, "mfcv_ms": e.mfcv_ms, "status": e.status}
            for e in run.estimates
        ],
        "series": _series_to_dict(run.series),
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1, sort_keys=True)
        f.write("\n")


def read_run(path) -> RunDocument:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
        rec = doc["recording"]
        estimates = tuple(
            WindowEstimate(e["window"], e["time_s"], ModulationGain(e["gain"]),
                           e["delta_t_samples"], e["mfcv_ms"], e["status"])
            for e in doc["estimates"])
        return RunDocument(EstimatorConfig.from_dict(doc["config"]), rec["rate_hz"],
                           rec["distance_m"], rec["n_samples"], estimates,
                           _series_from_dict(doc["series"]))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed series file ({exc})") from None


# report ------------------------------------------------------------------------

@dataclass(frozen=True)
class ReportDocument:
    config: dict
    per_second: Tuple[SecondStats, ...]
    exclusion_counts: Dict[str, int]
    total_evaluations: int
    overall: Optional[OverallStats]
    trend_slope_ms_per_s: Optional[float]
    trend_intercept_ms: Optional[float]
    comparison: Optional[LiteratureComparison]

    @property
    def valid_count(self) -> int:
        return self.exclusion_counts.get(VALID, 0)


def build_report(run: RunDocument) -> ReportDocument:
    counts = status_counts(run.estimates)
    series = run.series
    config = dict(run.config.to_dict(), rate_hz=run.rate_hz, distance_m=run.distance_m,
                  n_samples=run.n_samples)
    return ReportDocument(
        config=config,
        per_second=series.per_second,
        exclusion_counts=counts,
        total_evaluations=len(run.estimates),
        overall=series.overall,
        trend_slope_ms_per_s=series.trend_slope_ms_per_s,
        trend_intercept_ms=series.trend_intercept_ms,
        comparison=compare_literature(series) if series.overall is not None else None,
    )


def _value(v) -> str:
    if isinstance(v, float):
        return fmt(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_value(x) for x in v)
    return str(v)


def render_report(report: ReportDocument) -> str:
    out: List[str] = []
    out.append("[config]")
    for k in sorted(report.config):
        out.append(f"{k} = {_value(report.config[k])}")

    out.append("")
    out.append("[exclusions]")
    for status in STATUSES:
        out.append(f"{status} = {report.exclusion_counts.get(status, 0)}")
    out.append(f"total = {report.total_evaluations}")

    out.append("")
    out.append("[overall]")
    o = report.overall
    if o is None:
        out.append("no valid estimates")
    else:
        out.append(f"n_valid = {o.n_valid}")
        out.append(f"min_ms = {fmt(o.min_ms)}")
        out.append(f"max_ms = {fmt(o.max_ms)}")
        out.append(f"mean_ms = {fmt(o.mean_ms)}")
        out.append(f"sd_ms = {fmt(o.sd_ms)}")

    out.append("")
    out.append("[trend]")
    if report.trend_slope_ms_per_s is None:
        out.append("no trend")
    else:
        out.append(f"slope_ms_per_s = {fmt(report.trend_slope_ms_per_s)}")
        out.append(f"intercept_ms = {fmt(report.trend_intercept_ms)}")

    out.append("")
    out.append("[per_second]")
    out.append("second,mean_ms,sd_ms,n_valid")
    for r in report.per_second:
        out.append(f"{r.second_index},{fmt(r.mean_ms)},{fmt(r.sd_ms)},{r.n_valid}")

    out.append("")
    out.append("[literature]")
    if report.comparison is None:
        out.append("no comparison")
    else:
        out.append("label,low_ms,high_ms,verdict,range_inside,mean_difference_ms,sd_difference_ms")
        for r in report.comparison.rows:
            lo, hi = r.interval_ms
            out.append(f"{r.label},{fmt(lo)},{fmt(hi)},{r.verdict},"
                       f"{'yes' if r.range_inside else 'no'},"
                       f"{fmt(r.mean_difference_ms)},{fmt(r.sd_difference_ms)}")
    return "\n".join(out) + "\n"


def write_report(report: ReportDocument, path) -> None:
    text = render_report(report)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def emit_plot_data(estimates: Sequence[WindowEstimate], series: MfcvSeries, path) -> None:
    """Per-second CSV behind the fatigue plot; absent values are empty cells."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(PLOT_HEADER) + "\n")
        for r in series.per_second:
            f.write(f"{r.second_index},{fmt(r.mean_ms)},{fmt(r.sd_ms)},{r.n_valid}\n")
