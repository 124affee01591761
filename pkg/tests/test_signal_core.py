import numpy as np
import pytest

from mfcvkit.signal_core import (DelayProfile, RecordingError, SamplingRate, SynthesisError,
                                 TwoChannelRecording, ensure_valid, synthesize,
                                 validate_recording)


def rec(n_a=2200, n_b=2200, distance=0.025):
    return TwoChannelRecording(np.zeros(n_a), np.zeros(n_b), SamplingRate(2200), distance)


class TestValidate:
    def test_valid(self):
        assert validate_recording(rec()) is None

    def test_length_mismatch(self):
        assert validate_recording(rec(2200, 2199)) == "length mismatch"

    def test_non_positive_distance(self):
        assert validate_recording(rec(distance=0.0)) == "non-positive electrode distance"

    def test_non_finite(self):
        a = np.zeros(10)
        a[4] = np.nan
        r = TwoChannelRecording(a, np.zeros(10))
        assert validate_recording(r) == "non-finite sample"
        with pytest.raises(RecordingError) as exc:
            ensure_valid(r)
        assert exc.value.reason == "non-finite sample"

    def test_empty(self):
        assert validate_recording(rec(0, 0)) == "empty recording"

    @pytest.mark.parametrize("hz", [0.0, -1.0, float("inf")])
    def test_non_positive_rate(self, hz):
        with pytest.raises(RecordingError, match="non-positive sampling rate"):
            SamplingRate(hz)

    def test_defaults(self):
        r = TwoChannelRecording([0.0], [0.0])
        assert r.rate.hertz == 2200
        assert r.electrode_distance_m == 0.025


class TestDelayProfile:
    def test_ramp_midpoint(self):
        assert DelayProfile.ramp(10, 13).delay_at(17.0, 34.0) == pytest.approx(11.5, abs=1e-12)

    def test_piecewise(self):
        p = DelayProfile.piecewise([(0, 10), (10, 12), (20, 12)])
        assert p.delay_at(5.0, 20.0) == pytest.approx(11.0)
        assert p.delay_at(15.0, 20.0) == pytest.approx(12.0)

    def test_rejects_sub_sample_delay(self):
        with pytest.raises(SynthesisError):
            DelayProfile.constant(0.5)


class TestSynthesize:
    def test_constant_delay_is_exact_shift(self):
        r = synthesize(1.0, SamplingRate(2200), DelayProfile.constant(11), 0.0, seed=5)
        assert len(r) == 2200
        np.testing.assert_array_equal(r.channel_b[11:], r.channel_a[:-11])

    def test_prefix_carries_signal(self):
        r = synthesize(1.0, profile=DelayProfile.constant(11), seed=5)
        # channel B's first samples come from the source before t = 0
        assert np.any(r.channel_b[:11] != 0)

    @pytest.mark.parametrize("seed", [0, 1, 2, 99])
    def test_peak_normalized(self, seed):
        r = synthesize(2.0, profile=DelayProfile.constant(12), seed=seed)
        assert np.max(np.abs(r.channel_a)) == pytest.approx(1.0, abs=1e-9)

    def test_deterministic(self):
        args = (3.0, SamplingRate(2200), DelayProfile.ramp(10, 13), 0.02, 42)
        r1, r2 = synthesize(*args), synthesize(*args)
        assert r1.channel_a.tobytes() == r2.channel_a.tobytes()
        assert r1.channel_b.tobytes() == r2.channel_b.tobytes()

    def test_seed_changes_output(self):
        r1 = synthesize(1.0, seed=1)
        r2 = synthesize(1.0, seed=2)
        assert not np.array_equal(r1.channel_a, r2.channel_a)

    def test_noise_bounded(self):
        clean = synthesize(1.0, seed=4)
        noisy = synthesize(1.0, noise_amplitude=0.05, seed=4)
        # noise is drawn after the burst train, so the clean part is shared
        assert np.max(np.abs(noisy.channel_a - clean.channel_a)) <= 0.05
        assert np.max(np.abs(noisy.channel_b - clean.channel_b)) <= 0.05
        assert np.any(noisy.channel_a != clean.channel_a)

    def test_fractional_delay_interpolates(self):
        r = synthesize(1.0, profile=DelayProfile.constant(11.5), seed=8)
        mid = 0.5 * (r.channel_a[:-12] + r.channel_a[1:-11])
        np.testing.assert_allclose(r.channel_b[12:], mid, atol=1e-12)

    def test_ramp_delay_tracks_truth(self):
        # integer positions of the ramp are exact shifts
        r = synthesize(34.0, profile=DelayProfile.ramp(10, 13), seed=6)
        k = 17 * 2200  # delay exactly 11.5 here, 11 + 0.5
        assert r.channel_b[k] == pytest.approx(0.5 * (r.channel_a[k - 12] + r.channel_a[k - 11]),
                                               abs=1e-12)

    def test_errors(self):
        with pytest.raises(SynthesisError, match="exceeds"):
            synthesize(0.001, profile=DelayProfile.constant(11))
        with pytest.raises(SynthesisError, match="negative noise"):
            synthesize(1.0, noise_amplitude=-0.1)
        with pytest.raises(SynthesisError):
            synthesize(0.0)

    def test_immutable(self):
        r = synthesize(0.1)
        with pytest.raises(ValueError):
            r.channel_a[0] = 5.0
