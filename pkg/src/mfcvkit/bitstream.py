"""Ternary bitstream modulation with a variable gain.

Each sample is compared against a symmetric threshold ``base_threshold_v / G``:
above it maps to +1, below its negative to -1, anything in between to 0.
Raising the gain lowers the threshold, so more peaks get through.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

GAIN_MIN = 1.0
GAIN_MAX = 1.5
_EPS = 1e-9


class ModulationError(ValueError):
    pass


@dataclass(frozen=True)
class QuantizerConfig:
    v_max: float = 1.0
    n_bits: int = 12
    base_threshold_v: float = 0.2

    def __post_init__(self):
        if not self.v_max > 0:
            raise ModulationError("v_max must be positive")
        if int(self.n_bits) != self.n_bits or self.n_bits < 1:
            raise ModulationError("n_bits must be a positive integer")
        if not 0 < self.base_threshold_v < self.v_max:
            raise ModulationError("base_threshold_v must lie in (0, v_max)")


@dataclass(frozen=True)
class ModulationGain:
    value: float = 1.0

    def __post_init__(self):
        if not GAIN_MIN <= self.value <= GAIN_MAX:
            raise ModulationError(
                f"gain {self.value!r} outside [{GAIN_MIN}, {GAIN_MAX}]")

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True, eq=False)
class BitStream:
    bits: np.ndarray  # int8 over {-1, 0, +1}
    gain: ModulationGain
    source_length: int

    def __len__(self) -> int:
        return len(self.bits)

    def nonzero_indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)


def lsb(config: QuantizerConfig) -> float:
    """Quantization step ``v_max / 2**n_bits``."""
    return config.v_max / 2 ** config.n_bits


def effective_threshold(gain: ModulationGain, config: QuantizerConfig) -> float:
    return config.base_threshold_v / gain.value


def modulate(samples, gain: ModulationGain, config: QuantizerConfig = QuantizerConfig()) -> BitStream:
    x = np.asarray(samples, dtype=float)
    bad = np.flatnonzero(~np.isfinite(x))
    if bad.size:
        raise ModulationError(f"non-finite sample at index {bad[0]}")
    t = effective_threshold(gain, config)
    bits = np.zeros(x.shape, dtype=np.int8)
    bits[x > t] = 1
    bits[x < -t] = -1
    bits.flags.writeable = False
    return BitStream(bits, gain, len(x))


def gain_sweep(g_min: float = GAIN_MIN, g_max: float = GAIN_MAX, step: float = 0.1) -> List[ModulationGain]:
    """Ascending gains ``g_min, g_min + step, ...`` up to ``g_max`` (1e-9 slack).

    Values are computed as ``g_min + i*step`` and rounded to 12 decimals so that
    e.g. the sweep with step 0.1 yields exactly 1.1, 1.2, ... rather than
    accumulated float drift.
    """
    if not step > 0 or not math.isfinite(step):
        raise ModulationError("step must be positive")
    if g_min > g_max:
        raise ModulationError("empty gain range")
    count = int(math.floor((g_max - g_min) / step + _EPS)) + 1
    values = [round(g_min + i * step, 12) for i in range(count)]
    return [ModulationGain(min(v, g_max)) for v in values]
