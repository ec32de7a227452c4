"""Hybrid classical/quantum receiver noise.

The noise variable is N = G + q P with independent Gaussian G and Poisson P;
q is the energy per count (photon energy). The two components are assumed
independent, and the combined (summed) white spectral level sigma_G^2 +
q^2 lambda_P is what enters the fading-capacity SNR: a literal
cross-spectrum of independent processes would vanish and leave the SNR
undefined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import AtomicDistributionError, ParameterError

_POISSON_TAIL = 1e-12


@dataclass(frozen=True)
class HybridNoiseSpec:
    """Gaussian variance/mean, Poisson intensity, and quantum energy scale."""

    sigma_g2: float
    lambda_p: float
    quantum_scale: float
    mu_g: float = 0.0

    def __post_init__(self):
        if self.sigma_g2 < 0:
            raise ParameterError(f"Gaussian variance must be >= 0, got {self.sigma_g2}")
        if self.lambda_p < 0:
            raise ParameterError(f"Poisson intensity must be >= 0, got {self.lambda_p}")
        if not (self.quantum_scale > 0):
            raise ParameterError(
                f"quantum energy scale must be > 0, got {self.quantum_scale}"
            )
        if not math.isfinite(self.mu_g):
            raise ParameterError("Gaussian mean must be finite")


def poisson_truncation(lambda_p: float) -> int:
    """Smallest summation cap keeping the truncated Poisson tail < 1e-12."""
    return int(math.ceil(lambda_p + 12.0 * math.sqrt(lambda_p) + 30.0))


def hybrid_moments(spec: HybridNoiseSpec):
    """(mean, variance, second central moment) of G + q P.

    Independence makes the moments additive: mean = mu_G + q lambda_P and
    variance = sigma_G^2 + q^2 lambda_P; the second central moment equals
    the variance.
    """
    mean = spec.mu_g + spec.quantum_scale * spec.lambda_p
    variance = spec.sigma_g2 + spec.quantum_scale ** 2 * spec.lambda_p
    return mean, variance, variance


def hybrid_density(spec: HybridNoiseSpec, x):
    """Probability density of G + q P at x (scalar or array).

    Poisson mixture of Gaussians truncated where the tail mass drops below
    1e-12. A zero Gaussian variance leaves a purely atomic distribution
    with no density; use the Poisson mass function directly in that case.
    """
    if spec.sigma_g2 == 0.0:
        raise AtomicDistributionError(
            "sigma_g2 = 0 gives an atomic distribution; no density exists"
        )
    x = np.asarray(x, dtype=float)
    sigma = math.sqrt(spec.sigma_g2)
    if spec.lambda_p == 0.0:
        out = np.exp(-0.5 * ((x - spec.mu_g) / sigma) ** 2) / (
            sigma * math.sqrt(2.0 * math.pi)
        )
        return float(out) if out.ndim == 0 else out
    kmax = poisson_truncation(spec.lambda_p)
    k = np.arange(kmax + 1)
    log_pmf = k * math.log(spec.lambda_p) - spec.lambda_p - gammaln(k + 1)
    pmf = np.exp(log_pmf)
    centers = spec.mu_g + spec.quantum_scale * k
    gauss = np.exp(
        -0.5 * ((x[..., None] - centers) / sigma) ** 2
    ) / (sigma * math.sqrt(2.0 * math.pi))
    out = np.sum(pmf * gauss, axis=-1)
    return float(out) if out.ndim == 0 else out


def cross_psd(spec: HybridNoiseSpec, f: float, bandwidth: float) -> float:
    """Combined white spectral level of the two noise components.

    Flat over [0, bandwidth] and independent of f in this model; the total
    noise power over the band is the returned level times the bandwidth.
    """
    if not (bandwidth > 0):
        raise ParameterError(f"bandwidth must be positive, got {bandwidth}")
    return spec.sigma_g2 + spec.quantum_scale ** 2 * spec.lambda_p


def sample_hybrid(spec: HybridNoiseSpec, count: int, rng: np.random.Generator):
    """Monte-Carlo draws of G + q P (used by validation suites)."""
    gauss = rng.normal(spec.mu_g, math.sqrt(spec.sigma_g2), count)
    return gauss + spec.quantum_scale * rng.poisson(spec.lambda_p, count)
