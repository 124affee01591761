"""Muscle-fiber conduction velocity estimation from two-channel surface EMG.

Pipeline: threshold each channel into a ternary bitstream at several
modulation gains, cross-correlate the bitstreams window by window, turn the
peak lag into a velocity, and track the per-second mean for a fatigue trend.
"""
from .bitstream import (BitStream, ModulationGain, QuantizerConfig, gain_sweep, lsb,
                        modulate)
from .mfcv import (EstimatorConfig, MfcvSeries, WindowEstimate, compare_literature,
                   estimate_series, estimate_window, mfcv_from_delay)
from .signal_core import (DelayProfile, SamplingRate, TwoChannelRecording, synthesize,
                          validate_recording)
from .xcorr import (CorrelationWindow, LagProfile, brute_force_correlate,
                    cross_correlate, estimate_delay)

__version__ = "0.1.0"
