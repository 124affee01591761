import numpy as np
import pytest

from mfcvkit.xcorr import (NEGATIVE, NO_SIGNAL, POSITIVE, WRONG_SIGN, ZERO_LAG,
                           CorrelationError, CorrelationWindow, LagProfile,
                           brute_force_correlate, cross_correlate, estimate_delay, peak_index)


def window(x, y):
    return CorrelationWindow(np.asarray(x, float), np.asarray(y, float))


class TestBruteForce:
    """The oracle itself, checked on hand-enumerated cases."""

    def test_autocorrelation(self):
        p = brute_force_correlate(window([1, 2, 3], [1, 2, 3]))
        assert p.values.tolist() == [3, 8, 14, 8, 3]
        assert p.lags.tolist() == [-2, -1, 0, 1, 2]

    def test_padded_impulse(self):
        # lags -1, 0, 1: x[k]y[k-l] nonzero only for k=0, k-l=1
        p = brute_force_correlate(window([1, 0], [0, 1]))
        assert p.values.tolist() == [1, 0, 0]
        assert peak_index(p) - 2 == -1

    def test_unit_impulse(self):
        p = brute_force_correlate(window([1, 0, 0], [1, 0, 0]))
        assert p.values.tolist() == [0, 0, 1, 0, 0]


class TestCrossCorrelate:
    def test_known_vector(self):
        p = cross_correlate(window([1, 2, 3], [1, 2, 3]))
        assert p.value_at(0) == 14
        np.testing.assert_array_equal(p.values, p.values[::-1])

    def test_delayed_impulse(self):
        x, y = [0, 1, 0, 0], [0, 0, 1, 0]
        p = cross_correlate(window(x, y))
        assert len(p.values) == 7
        assert int(p.lags[np.argmax(p.values)]) == -1
        assert estimate_delay(p, NEGATIVE).delta_t_samples == 1

    def test_zeros(self):
        p = cross_correlate(window(np.zeros(5), np.arange(5)))
        assert not np.any(p.values)

    def test_too_short(self):
        with pytest.raises(CorrelationError):
            window([1.0], [1.0])
        with pytest.raises(CorrelationError):
            window([1.0, 2.0], [1.0])

    @pytest.mark.parametrize("L", [2, 3, 16, 64, 257])
    def test_matches_oracle(self, L):
        rng = np.random.default_rng(L)
        w = window(rng.normal(size=L), rng.normal(size=L))
        np.testing.assert_array_equal(cross_correlate(w).values, brute_force_correlate(w).values)

    @pytest.mark.parametrize("L", [16, 200])
    def test_matches_numpy(self, L):
        # independent third route: numpy's full-mode correlate uses the same lag convention
        rng = np.random.default_rng(L + 1)
        x, y = rng.normal(size=L), rng.normal(size=L)
        np.testing.assert_allclose(cross_correlate(window(x, y)).values,
                                   np.correlate(x, y, "full"), rtol=1e-10, atol=1e-10)

    def test_zero_lag_is_dot_product(self):
        rng = np.random.default_rng(0)
        x, y = rng.normal(size=33), rng.normal(size=33)
        assert cross_correlate(window(x, y)).value_at(0) == pytest.approx(float(x @ y), rel=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_swap_reflects(self, seed):
        rng = np.random.default_rng(seed)
        x, y = rng.normal(size=40), rng.normal(size=40)
        pxy = cross_correlate(window(x, y)).values
        pyx = cross_correlate(window(y, x)).values
        np.testing.assert_allclose(pxy, pyx[::-1], rtol=1e-12, atol=1e-12)


def profile_with_peak(L, index_1based):
    v = np.zeros(2 * L - 1)
    v[index_1based - 1] = 1.0
    return LagProfile(v, L)


class TestEstimateDelay:
    def test_eq4_arithmetic(self):
        r = estimate_delay(profile_with_peak(2200, 2189), NEGATIVE)
        assert r.valid and r.delta_t_samples == 11 and r.signed_lag == -11

    def test_zero_lag(self):
        r = estimate_delay(profile_with_peak(2200, 2200), NEGATIVE)
        assert r.reason == ZERO_LAG and r.delta_t_samples is None

    def test_wrong_sign(self):
        r = estimate_delay(profile_with_peak(2200, 2211), NEGATIVE)
        assert r.reason == WRONG_SIGN
        assert estimate_delay(profile_with_peak(2200, 2211), POSITIVE).delta_t_samples == 11

    def test_no_signal(self):
        assert estimate_delay(LagProfile(np.zeros(7), 4)).reason == NO_SIGNAL

    def test_tie_prefers_smaller_magnitude_then_negative(self):
        v = np.zeros(9)  # L = 5, lags -4..4
        v[[0, 2, 6]] = 3.0  # lags -4, -2, 2
        assert peak_index(LagProfile(v, 5)) - 5 == -2
        v = np.zeros(9)
        v[[1, 8]] = 3.0  # lags -3, 4
        assert peak_index(LagProfile(v, 5)) - 5 == -3

    @pytest.mark.parametrize("d", [1, 3, 10, 13, 40])
    def test_shift_theorem(self, d):
        rng = np.random.default_rng(d)
        L = 200
        x = np.where(rng.random(L) < 0.3, rng.choice([-1.0, 1.0], L), 0.0)
        y = np.concatenate([np.zeros(d), x[:-d]])
        r = estimate_delay(cross_correlate(window(x, y)), NEGATIVE)
        assert r.delta_t_samples == d

    @pytest.mark.parametrize("c", [0.001, 2.5, 1e6])
    def test_scale_invariance(self, c):
        rng = np.random.default_rng(11)
        x = rng.normal(size=120)
        y = np.concatenate([np.zeros(7), x[:-7]]) + 0.1 * rng.normal(size=120)
        base = peak_index(cross_correlate(window(x, y)))
        assert peak_index(cross_correlate(window(c * x, c * y))) == base

    def test_swap_flips_sign(self):
        x = np.array([0, 1, 0, 0, 0.0])
        y = np.array([0, 0, 0, 1, 0.0])
        assert estimate_delay(cross_correlate(window(x, y)), NEGATIVE).signed_lag == -2
        assert estimate_delay(cross_correlate(window(y, x)), POSITIVE).signed_lag == 2

    def test_bad_sign_argument(self):
        with pytest.raises(CorrelationError):
            estimate_delay(profile_with_peak(3, 1), "sideways")
