"""Recording types, validation and a synthetic two-channel EMG generator.

The generator produces a pseudo-EMG burst train on channel A and a delayed
copy on channel B, so every downstream estimate can be checked against a
known inter-channel delay.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Tuple

import numpy as np

DEFAULT_RATE_HZ = 2200.0
DEFAULT_DISTANCE_M = 0.025

# burst train parameters for the synthetic generator; dense trains with
# 100-250 Hz carriers keep threshold crossings steep enough that 0.05 V
# of noise does not blur the integer delay estimate
BURSTS_PER_SECOND = 250.0
CARRIER_HZ = (100.0, 250.0)
ENVELOPE_SIGMA_S = (0.003, 0.008)
BURST_AMPLITUDE = (0.3, 1.0)


class RecordingError(ValueError):
    """Raised when a recording violates one of its invariants."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


class SynthesisError(ValueError):
    pass


@dataclass(frozen=True)
class SamplingRate:
    hertz: float = DEFAULT_RATE_HZ

    def __post_init__(self):
        if not (math.isfinite(self.hertz) and self.hertz > 0):
            raise RecordingError("non-positive sampling rate", repr(self.hertz))


@dataclass(frozen=True, eq=False)
class TwoChannelRecording:
    """Paired samples from electrodes A and B (volts).

    Construction does not validate; call :func:`validate_recording` or
    :func:`ensure_valid` before use.
    """

    channel_a: np.ndarray
    channel_b: np.ndarray
    rate: SamplingRate = field(default_factory=SamplingRate)
    electrode_distance_m: float = DEFAULT_DISTANCE_M

    def __post_init__(self):
        a = np.array(self.channel_a, dtype=float)
        b = np.array(self.channel_b, dtype=float)
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "channel_a", a)
        object.__setattr__(self, "channel_b", b)

    def __len__(self) -> int:
        return len(self.channel_a)

    @property
    def duration_s(self) -> float:
        return len(self) / self.rate.hertz

    def scaled(self, factor: float) -> "TwoChannelRecording":
        return replace(self, channel_a=self.channel_a * factor,
                       channel_b=self.channel_b * factor)


def validate_recording(rec: TwoChannelRecording) -> Optional[str]:
    """Return None if ``rec`` is valid, else the first violated invariant."""
    if len(rec.channel_a) != len(rec.channel_b):
        return "length mismatch"
    if len(rec.channel_a) < 1:
        return "empty recording"
    if not (np.all(np.isfinite(rec.channel_a)) and np.all(np.isfinite(rec.channel_b))):
        return "non-finite sample"
    hz = rec.rate.hertz
    if not (math.isfinite(hz) and hz > 0):
        return "non-positive sampling rate"
    d = rec.electrode_distance_m
    if not (math.isfinite(d) and d > 0):
        return "non-positive electrode distance"
    return None


def ensure_valid(rec: TwoChannelRecording) -> TwoChannelRecording:
    reason = validate_recording(rec)
    if reason is not None:
        raise RecordingError(reason)
    return rec


@dataclass(frozen=True)
class DelayProfile:
    """Ground-truth inter-channel delay (in samples) as a function of time."""

    kind: str
    start_delay_samples: float
    end_delay_samples: float
    breakpoints: Optional[Tuple[Tuple[float, float], ...]] = None

    def __post_init__(self):
        if self.kind not in ("constant", "linear_ramp", "piecewise"):
            raise SynthesisError(f"unknown delay profile kind {self.kind!r}")
        if self.kind == "piecewise":
            if not self.breakpoints:
                raise SynthesisError("piecewise profile needs breakpoints")
            times = [t for t, _ in self.breakpoints]
            if any(t1 <= t0 for t0, t1 in zip(times, times[1:])):
                raise SynthesisError("breakpoint times must be strictly increasing")
        for d in self._all_delays():
            if not (math.isfinite(d) and d >= 1):
                raise SynthesisError(f"delay {d!r} is below 1 sample")

    @classmethod
    def constant(cls, delay: float) -> "DelayProfile":
        return cls("constant", delay, delay)

    @classmethod
    def ramp(cls, start: float, end: float) -> "DelayProfile":
        return cls("linear_ramp", start, end)

    @classmethod
    def piecewise(cls, points: Sequence[Tuple[float, float]]) -> "DelayProfile":
        pts = tuple((float(t), float(d)) for t, d in points)
        return cls("piecewise", pts[0][1] if pts else 1.0,
                   pts[-1][1] if pts else 1.0, pts)

    def _all_delays(self):
        yield self.start_delay_samples
        yield self.end_delay_samples
        for _, d in self.breakpoints or ():
            yield d

    def max_delay(self) -> float:
        return max(self._all_delays())

    def delay_at(self, t_s, duration_s: float):
        """Delay in samples at time(s) ``t_s`` for a recording of ``duration_s``."""
        t = np.asarray(t_s, dtype=float)
        if self.kind == "constant":
            out = np.full_like(t, float(self.start_delay_samples))
        elif self.kind == "linear_ramp":
            frac = t / duration_s
            out = self.start_delay_samples + (self.end_delay_samples - self.start_delay_samples) * frac
        else:
            bt = [p[0] for p in self.breakpoints]
            bd = [p[1] for p in self.breakpoints]
            out = np.interp(t, bt, bd)
        return out if out.ndim else float(out)


def _burst_train(n: int, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Sum of Gaussian-windowed sinusoid packets at random onsets."""
    x = np.zeros(n)
    n_bursts = max(1, int(round(BURSTS_PER_SECOND * n / rate)))
    centers = rng.uniform(0, n, n_bursts)
    freqs = rng.uniform(*CARRIER_HZ, n_bursts)
    sigmas = rng.uniform(*ENVELOPE_SIGMA_S, n_bursts) * rate
    amps = rng.uniform(*BURST_AMPLITUDE, n_bursts)
    phases = rng.uniform(0, 2 * np.pi, n_bursts)
    for c, f, s, a, ph in zip(centers, freqs, sigmas, amps, phases):
        lo = max(0, int(c - 4 * s))
        hi = min(n, int(c + 4 * s) + 1)
        k = np.arange(lo, hi)
        u = k - c
        x[lo:hi] += a * np.exp(-0.5 * (u / s) ** 2) * np.cos(2 * np.pi * f * u / rate + ph)
    return x


def synthesize(duration_s: float, rate: SamplingRate = SamplingRate(),
               profile: DelayProfile = DelayProfile.constant(11),
               noise_amplitude: float = 0.0, seed: int = 0,
               electrode_distance_m: float = DEFAULT_DISTANCE_M) -> TwoChannelRecording:
    """Generate a two-channel pseudo-EMG recording with a known delay.

    Channel B at sample k equals the clean source evaluated at ``k - delay(k/rate)``;
    fractional positions use linear interpolation, so integer delays give
    exact sample shifts. The source extends before t=0, so channel B's first
    samples carry signal too. The clean channel A peak is normalized to 1.0 V,
    then independent uniform noise in [-noise_amplitude, noise_amplitude] is
    added to each channel.
    """
    if not duration_s > 0:
        raise SynthesisError("duration must be positive")
    if noise_amplitude < 0 or not math.isfinite(noise_amplitude):
        raise SynthesisError("negative noise amplitude")
    hz = rate.hertz
    n = int(round(duration_s * hz))
    if n < 1:
        raise SynthesisError("duration shorter than one sample")
    if profile.max_delay() >= n:
        raise SynthesisError(
            f"delay {profile.max_delay()} exceeds recording length {n} samples")

    rng = np.random.default_rng(seed)
    pad = int(math.ceil(profile.max_delay())) + 1
    # source[j] is the clean signal at sample index j - pad; one extra sample
    # on the right keeps interpolation in range
    source = _burst_train(n + pad + 1, hz, rng)
    peak = np.max(np.abs(source[pad:pad + n]))
    if peak > 0:
        source = source / peak

    k = np.arange(n)
    a = source[pad:pad + n].copy()
    pos = k - np.asarray(profile.delay_at(k / hz, n / hz), dtype=float) + pad
    i0 = np.floor(pos).astype(int)
    frac = pos - i0
    b = source[i0] + frac * (source[i0 + 1] - source[i0])

    if noise_amplitude > 0:
        a = a + rng.uniform(-noise_amplitude, noise_amplitude, n)
        b = b + rng.uniform(-noise_amplitude, noise_amplitude, n)
    return TwoChannelRecording(a, b, rate, electrode_distance_m)
