"""Zero-padded discrete cross-correlation and argmax delay extraction.

Convention: ``r[l] = sum_k x[k] * y[k - l]`` for lags ``l = -(L-1) .. L-1``,
stored ascending so that (1-based) index ``m`` holds lag ``m - L``. When
channel B lags channel A by ``d`` samples the peak sits at lag ``-d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

POSITIVE = "positive"
NEGATIVE = "negative"

NO_SIGNAL = "no_signal"
ZERO_LAG = "zero_lag"
WRONG_SIGN = "wrong_sign"


class CorrelationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CorrelationWindow:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or y.ndim != 1 or len(x) != len(y):
            raise CorrelationError("x and y must be 1-D and of equal length")
        if len(x) < 2:
            raise CorrelationError("window shorter than 2 samples")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def window_length(self) -> int:
        return len(self.x)


@dataclass(frozen=True, eq=False)
class LagProfile:
    values: np.ndarray
    window_length: int

    @property
    def lags(self) -> np.ndarray:
        L = self.window_length
        return np.arange(-(L - 1), L)

    def value_at(self, lag: int) -> float:
        return float(self.values[lag + self.window_length - 1])


def cross_correlate(w: CorrelationWindow) -> LagProfile:
    """Shift-and-add form of the correlation sum.

    Sample ``x[k]`` contributes ``x[k] * y[::-1]`` to output slots ``k .. k+L-1``.
    Every output slot accumulates its terms in ascending ``k``, the same order
    as the literal double loop, so the two agree to the last bit.
    """
    x, y = w.x, w.y
    L = len(x)
    out = np.zeros(2 * L - 1)
    y_rev = y[::-1]
    for k in np.flatnonzero(x):
        out[k:k + L] += x[k] * y_rev
    return LagProfile(out, L)


def brute_force_correlate(w: CorrelationWindow) -> LagProfile:
    """Literal double loop over every lag and sample. Test oracle; O(L^2) in Python."""
    x = w.x.tolist()
    y = w.y.tolist()
    L = len(x)
    values = []
    for lag in range(-(L - 1), L):
        acc = 0.0
        # k runs over the samples where y[k - lag] falls inside the window
        for k in range(max(0, lag), min(L, L + lag)):
            acc += x[k] * y[k - lag]
        values.append(acc)
    return LagProfile(np.array(values), L)


@dataclass(frozen=True)
class DelayResult:
    delta_t_samples: Optional[int]
    peak_value: Optional[float]
    signed_lag: Optional[int] = None
    reason: Optional[str] = None

    @property
    def valid(self) -> bool:
        return self.reason is None


def peak_index(profile: LagProfile) -> int:
    """1-based index of the maximum (C_max).

    Ties go to the smallest |lag|, then to the negative lag.
    """
    v = profile.values
    L = profile.window_length
    candidates = np.flatnonzero(v == v.max())
    lags = candidates - (L - 1)
    best = min(lags.tolist(), key=lambda s: (abs(s), s))
    return best + L


def estimate_delay(profile: LagProfile, expected_sign: str = NEGATIVE) -> DelayResult:
    if expected_sign not in (POSITIVE, NEGATIVE):
        raise CorrelationError(f"expected_sign must be {POSITIVE!r} or {NEGATIVE!r}")
    v = profile.values
    if not np.any(v):
        return DelayResult(None, None, None, NO_SIGNAL)
    c_max = peak_index(profile)
    s = c_max - profile.window_length
    peak = float(v[c_max - 1])
    if s == 0:
        return DelayResult(None, peak, s, ZERO_LAG)
    if (s > 0) != (expected_sign == POSITIVE):
        return DelayResult(None, peak, s, WRONG_SIGN)
    return DelayResult(abs(s), peak, s)
