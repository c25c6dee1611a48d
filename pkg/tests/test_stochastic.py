"""
Tests for distribution parameters, raw moments and Gamma matching

Tests cover:
- Parameter validation of NakagamiParams, GammaParams, PowerMoments
- Raw moment closed forms and their Monte-Carlo cross-checks
- Moment matching, scaling and degeneracy
- Gamma pdf/cdf against scipy.stats
- Random streams and samplers
"""
import math

import numpy as np
import pytest
from scipy import stats

from src.irs_noma.errors import DegenerateVarianceError, DomainError
from src.irs_noma.stochastic import (
    GammaParams,
    NakagamiParams,
    PowerMoments,
    gamma_cdf,
    gamma_pdf,
    gamma_raw_moment,
    make_stream,
    match_gamma,
    nakagami_raw_moment,
    sample_gamma,
    sample_nakagami,
    scale_gamma,
)


def _dkw_bound(n: int, alpha: float = 0.01) -> float:
    """Dvoretzky-Kiefer-Wolfowitz band half-width"""
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


class TestParameterValidation:
    """Test construction-time checks"""

    @pytest.mark.parametrize("m, omega", [(0.4, 1.0), (1.0, 0.0), (1.0, -1.0), (math.nan, 1.0)])
    def test_invalid_nakagami(self, m, omega):
        with pytest.raises(DomainError):
            NakagamiParams(m, omega)

    @pytest.mark.parametrize("k, theta", [(0.0, 1.0), (1.0, 0.0), (math.inf, 1.0)])
    def test_invalid_gamma(self, k, theta):
        with pytest.raises(DomainError):
            GammaParams(k, theta)

    def test_invalid_moments(self):
        with pytest.raises(DomainError):
            PowerMoments(0.0, 1.0)
        with pytest.raises(DomainError):
            PowerMoments(1.0, -1.0)

    def test_power_gamma(self):
        """|H|^2 ~ Gamma(m, omega / m)"""
        power = NakagamiParams(4.0, 2.0).power_gamma()
        assert power.k == 4.0
        assert power.theta == pytest.approx(0.5)
        assert power.mean == pytest.approx(2.0)


class TestRawMoments:
    """Test the Nakagami and Gamma raw moment formulas"""

    @pytest.mark.parametrize("m", [0.5, 1.0, 2.25, 6.0, 80.0])
    def test_unit_mean_power(self, m):
        assert nakagami_raw_moment(NakagamiParams(m, 1.0), 2) == pytest.approx(1.0, rel=1e-12)

    def test_rayleigh_mean(self):
        """Rayleigh amplitude with unit power has mean sqrt(pi) / 2"""
        value = nakagami_raw_moment(NakagamiParams(1.0, 1.0), 1)
        assert value == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-12)

    def test_fourth_moment(self):
        """E|H|^4 = omega^2 (m + 1) / m"""
        params = NakagamiParams(4.0, 1e-11)
        assert nakagami_raw_moment(params, 4) == pytest.approx(1e-22 * 5.0 / 4.0, rel=1e-12)

    def test_matches_scipy_nakagami(self):
        params = NakagamiParams(2.25, 3.0)
        reference = stats.nakagami(2.25, scale=math.sqrt(3.0))
        for p in range(1, 5):
            assert nakagami_raw_moment(params, p) == pytest.approx(reference.moment(p), rel=1e-10)

    def test_gamma_moments(self):
        assert gamma_raw_moment(GammaParams(2.0, 3.0), 2) == pytest.approx(54.0)
        assert gamma_raw_moment(GammaParams(10.44, 0.3258), 1) == pytest.approx(10.44 * 0.3258)

    def test_large_shape_does_not_overflow(self):
        """Shapes of a few thousand stay finite through the log form"""
        value = gamma_raw_moment(GammaParams(4000.0, 1e-6), 4)
        assert math.isfinite(value) and value > 0.0

    @pytest.mark.parametrize("p", [0, 5, 1.5])
    def test_invalid_order(self, p):
        with pytest.raises(DomainError):
            nakagami_raw_moment(NakagamiParams(1.0, 1.0), p)

    def test_fourth_moment_monte_carlo(self):
        """Closed form against 10^6 amplitude draws, within 2%"""
        params = NakagamiParams(4.0, 1.0)
        draws = sample_nakagami(params, make_stream(1), size=1_000_000)
        assert np.mean(draws**4) == pytest.approx(nakagami_raw_moment(params, 4), rel=0.02)

    def test_gamma_third_moment_monte_carlo(self):
        params = GammaParams(10.44, 0.3258)
        draws = sample_gamma(params, make_stream(2), size=1_000_000)
        assert np.mean(draws**3) == pytest.approx(gamma_raw_moment(params, 3), rel=0.01)


class TestMatchGamma:
    """Test Gamma moment matching"""

    def test_recovers_gamma(self):
        """Matching the moments of a Gamma law returns that law"""
        params = GammaParams(3.7, 0.8)
        moments = PowerMoments(gamma_raw_moment(params, 1), gamma_raw_moment(params, 2))
        matched = match_gamma(moments)
        assert matched.k == pytest.approx(3.7, rel=1e-12)
        assert matched.theta == pytest.approx(0.8, rel=1e-12)

    def test_nakagami_power(self):
        """Matching Nakagami power moments gives shape m and scale omega / m"""
        params = NakagamiParams(1.1, 1e-12)
        moments = PowerMoments(nakagami_raw_moment(params, 2), nakagami_raw_moment(params, 4))
        matched = match_gamma(moments)
        assert matched.k == pytest.approx(1.1, rel=1e-10)
        assert matched.theta == pytest.approx(1e-12 / 1.1, rel=1e-10)

    def test_deterministic_power(self):
        with pytest.raises(DegenerateVarianceError):
            match_gamma(PowerMoments(2.0, 4.0))

    def test_scaling_property(self):
        """c X ~ Gamma(k, c theta)"""
        scaled = scale_gamma(GammaParams(2.5, 0.4), 10.0)
        assert scaled.k == 2.5
        assert scaled.theta == pytest.approx(4.0)

    def test_scaled_moments_commute_with_matching(self):
        moments = PowerMoments(2.0, 7.0)
        direct = scale_gamma(match_gamma(moments), 3.0)
        via_moments = match_gamma(moments.scaled(3.0))
        assert via_moments.k == pytest.approx(direct.k, rel=1e-12)
        assert via_moments.theta == pytest.approx(direct.theta, rel=1e-12)

    def test_invalid_scale(self):
        with pytest.raises(DomainError):
            scale_gamma(GammaParams(1.0, 1.0), 0.0)


class TestGammaDistribution:
    """Test gamma_pdf and gamma_cdf"""

    def test_cdf_matches_scipy(self):
        params = GammaParams(10.44, 0.3258)
        reference = stats.gamma(10.44, scale=0.3258)
        for x in [0.5, 2.0, 3.4, 6.0]:
            assert gamma_cdf(params, x) == pytest.approx(reference.cdf(x), abs=1e-12)

    def test_cdf_non_positive(self):
        assert gamma_cdf(GammaParams(2.0, 1.0), 0.0) == 0.0
        assert gamma_cdf(GammaParams(2.0, 1.0), -3.0) == 0.0

    def test_pdf_matches_scipy_on_array(self):
        params = GammaParams(2.25, 1.5)
        x = np.linspace(0.01, 15.0, 50)
        expected = stats.gamma(2.25, scale=1.5).pdf(x)
        np.testing.assert_allclose(gamma_pdf(params, x), expected, rtol=1e-10)

    def test_pdf_scalar_and_origin(self):
        assert isinstance(gamma_pdf(GammaParams(3.0, 1.0), 1.0), float)
        assert gamma_pdf(GammaParams(3.0, 1.0), 0.0) == 0.0
        assert gamma_pdf(GammaParams(1.0, 2.0), 0.0) == pytest.approx(0.5)


class TestStreams:
    """Test counter-based random streams and samplers"""

    def test_reproducible(self):
        first = make_stream(42, 3).random(5)
        second = make_stream(42, 3).random(5)
        np.testing.assert_array_equal(first, second)

    def test_chunks_independent(self):
        assert not np.array_equal(make_stream(42, 0).random(5), make_stream(42, 1).random(5))

    def test_negative_seed(self):
        with pytest.raises(DomainError):
            make_stream(-1)

    def test_nakagami_mean_power(self):
        draws = sample_nakagami(NakagamiParams(2.25, 3.0), make_stream(5), size=1_000_000)
        assert np.mean(draws**2) == pytest.approx(3.0, rel=0.01)

    def test_rayleigh_reduction(self):
        """m = 1 amplitudes follow 1 - exp(-x^2 / omega)"""
        n = 200_000
        draws = sample_nakagami(NakagamiParams(1.0, 2.0), make_stream(6), size=n)
        result = stats.kstest(draws, lambda x: -np.expm1(-x * x / 2.0))
        assert result.statistic <= _dkw_bound(n)

    def test_gamma_cdf_consistency(self):
        """Empirical CDF of draws against gamma_cdf within the DKW band"""
        n = 200_000
        params = GammaParams(0.7, 2.0)
        draws = sample_gamma(params, make_stream(8), size=n)
        grid = np.quantile(draws, np.linspace(0.01, 0.99, 25))
        for x in grid:
            assert abs(np.mean(draws <= x) - gamma_cdf(params, x)) <= _dkw_bound(n)

    def test_exponential_median(self):
        draws = sample_gamma(GammaParams(1.0, 3.0), make_stream(9), size=1_000_000)
        assert np.median(draws) == pytest.approx(3.0 * math.log(2.0), rel=0.01)

    def test_small_shape_boost(self):
        """k < 1 draws Gamma(k + 1) * U^(1/k) from one stream"""
        params = GammaParams(0.3, 1.5)
        draws = sample_gamma(params, make_stream(10), size=1000)

        stream = make_stream(10)
        boosted = stream.gamma(0.3 + 1.0, 1.5, size=1000)
        expected = boosted * stream.random(size=1000) ** (1.0 / 0.3)
        np.testing.assert_array_equal(draws, expected)

    def test_small_shape_law(self):
        """k = 0.3 draws pass a KS test against the Gamma CDF within the DKW band"""
        n = 200_000
        draws = sample_gamma(GammaParams(0.3, 1.5), make_stream(12), size=n)
        result = stats.kstest(draws, stats.gamma(0.3, scale=1.5).cdf)
        assert result.statistic <= _dkw_bound(n)

    def test_scalar_draw(self):
        assert sample_gamma(GammaParams(0.6, 1.0), make_stream(13)) >= 0.0
