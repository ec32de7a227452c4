import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import poisson

from qho.errors import AtomicDistributionError, ParameterError
from qho.noise import (
    HybridNoiseSpec,
    cross_psd,
    hybrid_density,
    hybrid_moments,
    poisson_truncation,
    sample_hybrid,
)


class TestMoments:
    def test_reference_case(self):
        spec = HybridNoiseSpec(sigma_g2=1.0, mu_g=0.0, lambda_p=2.0, quantum_scale=1.0)
        mean, variance, second_central = hybrid_moments(spec)
        assert mean == 2.0
        assert variance == 3.0
        assert second_central == variance

    def test_pure_gaussian_limit(self):
        spec = HybridNoiseSpec(sigma_g2=0.7, mu_g=-1.2, lambda_p=0.0, quantum_scale=2.0)
        mean, variance, _ = hybrid_moments(spec)
        assert mean == -1.2
        assert variance == 0.7

    def test_monte_carlo_oracle_one_percent(self):
        spec = HybridNoiseSpec(sigma_g2=0.8, mu_g=0.3, lambda_p=4.0, quantum_scale=0.5)
        mean, variance, _ = hybrid_moments(spec)
        draws = sample_hybrid(spec, 1_000_000, np.random.default_rng(12345))
        assert draws.mean() == pytest.approx(mean, rel=0.01)
        assert draws.var() == pytest.approx(variance, rel=0.01)


class TestDensity:
    def test_zero_intensity_is_gaussian(self):
        spec = HybridNoiseSpec(sigma_g2=2.0, mu_g=0.5, lambda_p=0.0, quantum_scale=1.0)
        xs = np.linspace(-5.0, 6.0, 7)
        expected = np.exp(-0.5 * (xs - 0.5) ** 2 / 2.0) / math.sqrt(2 * math.pi * 2.0)
        np.testing.assert_allclose(hybrid_density(spec, xs), expected, rtol=1e-14)

    def test_integrates_to_one(self):
        spec = HybridNoiseSpec(sigma_g2=0.5, mu_g=-0.2, lambda_p=3.0, quantum_scale=0.8)
        total, err = quad(
            lambda x: hybrid_density(spec, x), -10.0, 25.0, limit=200
        )
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_moments_by_quadrature_match_analytic(self):
        spec = HybridNoiseSpec(sigma_g2=0.4, mu_g=0.1, lambda_p=1.5, quantum_scale=0.6)
        mean_ref, var_ref, _ = hybrid_moments(spec)
        mean, _ = quad(lambda x: x * hybrid_density(spec, x), -8.0, 15.0, limit=200)
        second, _ = quad(
            lambda x: (x - mean_ref) ** 2 * hybrid_density(spec, x), -8.0, 15.0,
            limit=200,
        )
        assert mean == pytest.approx(mean_ref, abs=1e-6)
        assert second == pytest.approx(var_ref, abs=1e-6)

    def test_peak_sits_near_first_atom(self):
        spec = HybridNoiseSpec(
            sigma_g2=0.0025, mu_g=0.0, lambda_p=1.0, quantum_scale=1.0
        )
        xs = np.linspace(-0.5, 3.5, 2001)
        pdf = hybrid_density(spec, xs)
        # unit intensity puts equal mass on counts 0 and 1; the analytic pdf
        # must show a local peak at the first atom, confirmed by a large
        # seeded histogram estimate
        window = (xs > 0.5) & (xs < 1.5)
        peak_x = xs[window][np.argmax(pdf[window])]
        assert abs(peak_x - 1.0) < 0.05
        assert pdf[np.argmin(np.abs(xs - 1.0))] > 5.0 * pdf[np.argmin(np.abs(xs - 0.5))]
        draws = sample_hybrid(spec, 1_000_000, np.random.default_rng(999))
        hist, edges = np.histogram(draws, bins=400, range=(0.5, 1.5), density=True)
        centers = 0.5 * (edges[:-1] + edges[1:])
        assert abs(centers[np.argmax(hist)] - peak_x) < 0.05

    def test_atomic_case_rejected(self):
        spec = HybridNoiseSpec(sigma_g2=0.0, mu_g=0.0, lambda_p=1.0, quantum_scale=1.0)
        with pytest.raises(AtomicDistributionError):
            hybrid_density(spec, 0.0)

    def test_density_is_nonnegative(self):
        spec = HybridNoiseSpec(sigma_g2=0.3, mu_g=0.0, lambda_p=2.5, quantum_scale=1.3)
        xs = np.linspace(-6.0, 20.0, 501)
        assert np.all(hybrid_density(spec, xs) >= 0.0)


class TestTruncation:
    @pytest.mark.parametrize("lam", [0.1, 1.0, 5.0, 25.0, 150.0])
    def test_tail_below_bound(self, lam):
        cap = poisson_truncation(lam)
        assert poisson.sf(cap, lam) < 1e-12


class TestCrossPsd:
    def test_classical_only(self):
        spec = HybridNoiseSpec(sigma_g2=3.0, mu_g=0.0, lambda_p=0.0, quantum_scale=1.0)
        assert cross_psd(spec, 1e14, 1e6) == 3.0

    def test_quantum_only(self):
        spec = HybridNoiseSpec(sigma_g2=0.0, mu_g=0.0, lambda_p=2.0, quantum_scale=0.5)
        assert cross_psd(spec, 1e14, 1e6) == 0.5

    def test_linear_in_intensity(self):
        base = HybridNoiseSpec(sigma_g2=1.0, mu_g=0.0, lambda_p=1.0, quantum_scale=0.7)
        doubled = HybridNoiseSpec(
            sigma_g2=1.0, mu_g=0.0, lambda_p=2.0, quantum_scale=0.7
        )
        gain = cross_psd(doubled, 1.0, 1.0) - cross_psd(base, 1.0, 1.0)
        assert gain == pytest.approx(0.7 ** 2, rel=1e-15)

    def test_flat_in_frequency(self):
        spec = HybridNoiseSpec(sigma_g2=1.0, mu_g=0.0, lambda_p=1.0, quantum_scale=0.7)
        values = {cross_psd(spec, f, 1e6) for f in (1.0, 1e9, 1e14)}
        assert len(values) == 1

    def test_bandwidth_validation(self):
        spec = HybridNoiseSpec(sigma_g2=1.0, mu_g=0.0, lambda_p=0.0, quantum_scale=1.0)
        with pytest.raises(ParameterError):
            cross_psd(spec, 1.0, 0.0)


class TestSpecValidation:
    def test_negative_variance_rejected(self):
        with pytest.raises(ParameterError):
            HybridNoiseSpec(sigma_g2=-1.0, mu_g=0.0, lambda_p=0.0, quantum_scale=1.0)

    def test_zero_quantum_scale_rejected(self):
        with pytest.raises(ParameterError):
            HybridNoiseSpec(sigma_g2=1.0, mu_g=0.0, lambda_p=0.0, quantum_scale=0.0)
