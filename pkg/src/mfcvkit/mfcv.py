"""Windowed MFCV estimation over a gain sweep, per-second aggregation and trend."""
from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bitstream import ModulationGain, QuantizerConfig, gain_sweep, modulate
from .signal_core import SamplingRate, TwoChannelRecording, ensure_valid
from .xcorr import (NEGATIVE, NO_SIGNAL, POSITIVE, WRONG_SIGN, ZERO_LAG,
                    CorrelationWindow, cross_correlate, estimate_delay)

VALID = "valid"
LOW_AMPLITUDE = "low_amplitude"
ABOVE_MAX = "above_physiological_max"
STATUSES = (VALID, LOW_AMPLITUDE, ZERO_LAG, WRONG_SIGN, ABOVE_MAX, NO_SIGNAL)


class EstimationError(ValueError):
    pass


@dataclass(frozen=True)
class EstimatorConfig:
    window_samples: int = 2200
    hop_samples: int = 2200
    gains: Tuple[ModulationGain, ...] = field(default_factory=lambda: tuple(gain_sweep()))
    quantizer: QuantizerConfig = field(default_factory=QuantizerConfig)
    amplitude_min_v: float = 0.2
    mfcv_max_ms: float = 6.0
    expected_sign: str = NEGATIVE

    def __post_init__(self):
        object.__setattr__(self, "gains", tuple(self.gains))
        if int(self.window_samples) != self.window_samples or self.window_samples < 2:
            raise EstimationError("window_samples must be an integer >= 2")
        if int(self.hop_samples) != self.hop_samples or self.hop_samples < 1:
            raise EstimationError("hop_samples must be an integer >= 1")
        if not self.gains:
            raise EstimationError("gains must be non-empty")
        if not self.amplitude_min_v >= 0:
            raise EstimationError("amplitude_min_v must be non-negative")
        if not self.mfcv_max_ms > 0:
            raise EstimationError("mfcv_max_ms must be positive")
        if self.expected_sign not in (POSITIVE, NEGATIVE):
            raise EstimationError("expected_sign must be 'positive' or 'negative'")

    def to_dict(self) -> dict:
        return {
            "window_samples": self.window_samples,
            "hop_samples": self.hop_samples,
            "gains": [g.value for g in self.gains],
            "v_max": self.quantizer.v_max,
            "n_bits": self.quantizer.n_bits,
            "base_threshold_v": self.quantizer.base_threshold_v,
            "amplitude_min_v": self.amplitude_min_v,
            "mfcv_max_ms": self.mfcv_max_ms,
            "expected_sign": self.expected_sign,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EstimatorConfig":
        return cls(
            window_samples=d["window_samples"],
            hop_samples=d["hop_samples"],
            gains=tuple(ModulationGain(g) for g in d["gains"]),
            quantizer=QuantizerConfig(d["v_max"], d["n_bits"], d["base_threshold_v"]),
            amplitude_min_v=d["amplitude_min_v"],
            mfcv_max_ms=d["mfcv_max_ms"],
            expected_sign=d["expected_sign"],
        )


@dataclass(frozen=True)
class WindowEstimate:
    window_index: int
    time_s: float
    gain: ModulationGain
    delta_t_samples: Optional[int]
    mfcv_ms: Optional[float]
    status: str

    @property
    def valid(self) -> bool:
        return self.status == VALID


@dataclass(frozen=True)
class SecondStats:
    second_index: int
    mean_ms: Optional[float]
    sd_ms: Optional[float]
    n_valid: int
    min_ms: Optional[float] = None
    max_ms: Optional[float] = None


@dataclass(frozen=True)
class OverallStats:
    """Statistics over every valid estimate of a run."""

    min_ms: float
    max_ms: float
    mean_ms: float
    sd_ms: Optional[float]
    n_valid: int


@dataclass(frozen=True)
class MfcvSeries:
    per_second: Tuple[SecondStats, ...]
    trend_slope_ms_per_s: Optional[float]
    trend_intercept_ms: Optional[float]
    overall: Optional[OverallStats] = None

    @property
    def has_trend(self) -> bool:
        return self.trend_slope_ms_per_s is not None


def mfcv_from_delay(distance_m: float, delta_t_samples: int, rate: SamplingRate) -> float:
    """Conduction velocity (m/s) for a delay in samples: ``distance / delay * rate``."""
    if delta_t_samples == 0:
        raise EstimationError("delay of 0 samples (division by zero)")
    if distance_m <= 0 or delta_t_samples < 0 or rate.hertz <= 0:
        raise EstimationError("arguments must be positive")
    return distance_m / delta_t_samples * rate.hertz


def n_windows(n_samples: int, config: EstimatorConfig) -> int:
    if n_samples < config.window_samples:
        return 0
    return (n_samples - config.window_samples) // config.hop_samples + 1


def estimate_window(rec: TwoChannelRecording, window_index: int, gain: ModulationGain,
                    config: EstimatorConfig) -> WindowEstimate:
    L = config.window_samples
    start = window_index * config.hop_samples
    if window_index < 0 or start + L > len(rec):
        raise EstimationError(f"window {window_index} out of bounds")
    time_s = start / rec.rate.hertz
    a = rec.channel_a[start:start + L]
    b = rec.channel_b[start:start + L]

    def result(status, delay=None, v=None):
        return WindowEstimate(window_index, time_s, gain, delay, v, status)

    # a window is only usable if both electrodes saw a significant peak
    if min(np.max(np.abs(a)), np.max(np.abs(b))) < config.amplitude_min_v:
        return result(LOW_AMPLITUDE)

    bits_a = modulate(a, gain, config.quantizer).bits
    bits_b = modulate(b, gain, config.quantizer).bits
    profile = cross_correlate(CorrelationWindow(bits_a, bits_b))
    delay = estimate_delay(profile, config.expected_sign)
    if not delay.valid:
        return result(delay.reason)
    v = mfcv_from_delay(rec.electrode_distance_m, delay.delta_t_samples, rec.rate)
    if v > config.mfcv_max_ms:
        return result(ABOVE_MAX, delay.delta_t_samples)
    return result(VALID, delay.delta_t_samples, v)


def _sorted(estimates: Sequence[WindowEstimate]) -> List[WindowEstimate]:
    return sorted(estimates, key=lambda e: (e.window_index, e.gain.value))


def aggregate(estimates: Sequence[WindowEstimate], n_seconds: int) -> MfcvSeries:
    """Group valid estimates by the second holding each window's start.

    Estimates starting past the last full second are not aggregated.
    """
    groups: Dict[int, List[float]] = {s: [] for s in range(n_seconds)}
    all_valid: List[float] = []
    for e in _sorted(estimates):
        if not e.valid:
            continue
        sec = int(math.floor(e.time_s + 1e-9))
        if sec in groups:
            groups[sec].append(e.mfcv_ms)
            all_valid.append(e.mfcv_ms)

    rows = []
    for sec in range(n_seconds):
        vals = groups[sec]
        mean = statistics.fmean(vals) if vals else None
        sd = statistics.stdev(vals) if len(vals) >= 2 else None
        rows.append(SecondStats(sec, mean, sd, len(vals),
                                min(vals) if vals else None, max(vals) if vals else None))

    slope, intercept = trend([(r.second_index, r.mean_ms) for r in rows if r.mean_ms is not None])
    overall = None
    if all_valid:
        overall = OverallStats(min(all_valid), max(all_valid), statistics.fmean(all_valid),
                               statistics.stdev(all_valid) if len(all_valid) >= 2 else None,
                               len(all_valid))
    return MfcvSeries(tuple(rows), slope, intercept, overall)


def trend(points: Sequence[Tuple[float, float]]) -> Tuple[Optional[float], Optional[float]]:
    """OLS slope and intercept; (None, None) with fewer than two points."""
    if len(points) < 2:
        return None, None
    xs = [float(p[0]) for p in points]
    ys = [float(p[1]) for p in points]
    fit = statistics.linear_regression(xs, ys)
    return fit.slope, fit.intercept


def estimate_series(rec: TwoChannelRecording, config: EstimatorConfig = EstimatorConfig()
                    ) -> Tuple[List[WindowEstimate], MfcvSeries]:
    ensure_valid(rec)
    count = n_windows(len(rec), config)
    if count == 0:
        raise EstimationError(
            f"recording of {len(rec)} samples is shorter than one window "
            f"({config.window_samples} samples)")
    estimates = [estimate_window(rec, w, g, config)
                 for w in range(count) for g in config.gains]
    estimates = _sorted(estimates)
    n_seconds = int(math.floor(len(rec) / rec.rate.hertz + 1e-9))
    return estimates, aggregate(estimates, n_seconds)


def status_counts(estimates: Sequence[WindowEstimate]) -> Dict[str, int]:
    c = Counter(e.status for e in estimates)
    return {s: c.get(s, 0) for s in STATUSES}


# literature comparison ----------------------------------------------------

@dataclass(frozen=True)
class RowVerdict:
    label: str
    interval_ms: Tuple[float, float]
    mean_inside: bool
    range_inside: bool
    mean_difference_ms: Optional[float]
    sd_difference_ms: Optional[float]

    @property
    def verdict(self) -> str:
        return "inside" if self.mean_inside else "outside"


@dataclass(frozen=True)
class LiteratureComparison:
    overall: OverallStats
    rows: Tuple[RowVerdict, ...]

    def row(self, label: str) -> RowVerdict:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)


def compare_literature(series: MfcvSeries, entries=None) -> LiteratureComparison:
    """Check the run's grand mean and range against published MFCV intervals."""
    from .io_pipeline import LITERATURE

    if series.overall is None:
        raise EstimationError("series has no valid estimates to compare")
    o = series.overall
    rows = []
    for e in entries if entries is not None else LITERATURE:
        lo, hi = e.interval_ms
        rows.append(RowVerdict(
            e.label, e.interval_ms,
            mean_inside=lo <= o.mean_ms <= hi,
            range_inside=lo <= o.min_ms and o.max_ms <= hi,
            mean_difference_ms=abs(o.mean_ms - e.mean_ms) if e.mean_ms is not None else None,
            sd_difference_ms=(abs(o.sd_ms - e.sd_ms)
                              if e.sd_ms is not None and o.sd_ms is not None else None),
        ))
    return LiteratureComparison(o, tuple(rows))
