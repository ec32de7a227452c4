"""Caldirola-Kanai treatment of the driven oscillator pair.

Starting from the classical-information frequency ``omega``, the oscillator
frequency ``omega_c`` and the quantization amount ``v`` (through
beta = sqrt(4 pi / (omega v))), a similarity transformation diagonalizes the
Hamiltonian. The coupling algebra has a two-valued sign branch; the derived
constants feed a linear two-index energy spectrum, separable width-scaled
eigenfunctions, and a Fourier-type joint wavefunction evaluated by
Gauss-Hermite quadrature.

Symbol hygiene: the energy-scale factors are named ``g_factor``/``s_factor``
and the wavefunction width parameters ``r_width``/``s_width`` to keep the
two unrelated S-like constants apart.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AccuracyError,
    BranchError,
    NonDiagonalizableError,
    NormalizationError,
    ParameterError,
)
from .special import hermite_poly, ho_wavefunction

_BETA_MIN = 1e-9
_BRANCHES = ("+", "-")


@dataclass(frozen=True)
class CKInputs:
    """Inputs of the diagonalization: frequencies, quantization, sign branch."""

    omega: float
    omega_c: float
    quantization: float
    branch: str | None = None

    def __post_init__(self):
        for value, name in ((self.omega, "omega"), (self.omega_c, "omega_c"),
                            (self.quantization, "quantization")):
            if not (value > 0 and math.isfinite(value)):
                raise ParameterError(f"{name} must be a positive finite number")
        if self.branch is not None and self.branch not in _BRANCHES:
            raise ParameterError(f"branch must be '+' or '-', got {self.branch!r}")
        if self.beta <= _BETA_MIN:
            raise ParameterError(
                f"beta = {self.beta:.3e} is too small; the coupling algebra is "
                f"singular as beta -> 0 (require beta > {_BETA_MIN:g})"
            )

    @property
    def beta(self) -> float:
        return math.sqrt(4.0 * math.pi / (self.omega * self.quantization))


@dataclass(frozen=True)
class CKParams:
    """Derived constants of the diagonalized Hamiltonian."""

    alpha: float
    gamma: float
    epsilon: float
    big_lambda: float
    sigma: float
    kappa: float
    r_width: float
    s_width: float
    g_factor: float
    s_factor: float
    branch: str
    inputs: CKInputs | None = None

    def as_dict(self):
        record = {
            "alpha": self.alpha,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "big_lambda": self.big_lambda,
            "sigma": self.sigma,
            "kappa": self.kappa,
            "r_width": self.r_width,
            "s_width": self.s_width,
            "g_factor": self.g_factor,
            "s_factor": self.s_factor,
            "branch": self.branch,
        }
        if self.inputs is not None:
            record["inputs"] = {
                "omega": self.inputs.omega,
                "omega_c": self.inputs.omega_c,
                "quantization": self.inputs.quantization,
                "beta": self.inputs.beta,
            }
        return record

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def _derive_for_branch(inputs: CKInputs, sign: float):
    w, wc, beta = inputs.omega, inputs.omega_c, inputs.beta
    epsilon = (w * w - wc * wc + beta * beta * w) / (2.0 * beta * math.sqrt(w) * wc)
    root = math.sqrt(epsilon * epsilon + 1.0)
    alpha = math.sqrt(wc / w) * (epsilon + sign * root)
    gamma = sign * 0.5 * math.sqrt(w / wc) / root
    big_lambda = (
        1.0 + alpha * alpha * wc / w - 2.0 * beta * alpha * math.sqrt(wc) / w
        + beta * beta / w
    )
    sigma = 1.0 / (1.0 + alpha * alpha * w / wc)
    kappa = (
        sigma
        + 2.0 * beta * epsilon * gamma * gamma / math.sqrt(w)
        - (2.0 * beta * gamma / math.sqrt(wc)) * (1.0 + alpha * gamma)
    )
    g_factor = -sign * beta * math.sqrt(w) / (2.0 * sigma * wc * root)
    s_factor = (
        1.0 - (beta * wc / w ** 1.5) * (epsilon - sign * root) + beta * beta / w
    )
    return epsilon, alpha, gamma, big_lambda, sigma, kappa, g_factor, s_factor


def derive_ck_params(inputs: CKInputs) -> CKParams:
    """Evaluate the coupling algebra for the requested (or auto-picked) branch.

    With ``branch=None`` the branch making both energy-scale factors
    nonnegative is selected; if neither qualifies a BranchError is raised
    rather than clamping. kappa <= 0 or Lambda <= 0 signals a regime where
    the diagonalization fails and raises with the offending values attached.
    """
    if inputs.branch is None:
        candidates = []
        for name in _BRANCHES:
            sign = 1.0 if name == "+" else -1.0
            derived = _derive_for_branch(inputs, sign)
            candidates.append((name, derived))
            if derived[6] >= 0.0 and derived[7] >= 0.0:
                branch, values = name, derived
                break
        else:
            summary = ", ".join(
                f"'{name}': G={d[6]:.4g}, S={d[7]:.4g}" for name, d in candidates
            )
            raise BranchError(
                f"neither sign branch yields nonnegative energy factors ({summary})"
            )
    else:
        branch = inputs.branch
        values = _derive_for_branch(inputs, 1.0 if branch == "+" else -1.0)
    epsilon, alpha, gamma, big_lambda, sigma, kappa, g_factor, s_factor = values
    if kappa <= 0 or big_lambda <= 0:
        raise NonDiagonalizableError(
            f"diagonalization failed: kappa = {kappa:.6g}, Lambda = {big_lambda:.6g} "
            f"(branch '{branch}')",
            kappa=kappa,
            big_lambda=big_lambda,
        )
    return CKParams(
        alpha=alpha,
        gamma=gamma,
        epsilon=epsilon,
        big_lambda=big_lambda,
        sigma=sigma,
        kappa=kappa,
        r_width=math.sqrt(1.0 / (sigma * kappa)),
        s_width=math.sqrt(big_lambda / sigma),
        g_factor=g_factor,
        s_factor=s_factor,
        branch=branch,
        inputs=inputs,
    )


def energy_level(n1, n2, params: CKParams, inputs: CKInputs) -> float:
    """Linear two-index spectrum: omega_c (n2+1/2) sqrt(G) + omega (n1+1/2) sqrt(S)."""
    if n1 < 0 or n2 < 0:
        raise ParameterError("level indices must be nonnegative")
    if params.g_factor < 0 or params.s_factor < 0:
        raise BranchError(
            f"branch '{params.branch}' gives G = {params.g_factor:.6g}, "
            f"S = {params.s_factor:.6g}; switch the sign selector"
        )
    return inputs.omega_c * (n2 + 0.5) * math.sqrt(params.g_factor) + inputs.omega * (
        n1 + 0.5
    ) * math.sqrt(params.s_factor)


def ck_wavefunction(n1, n2, x, eta, params: CKParams):
    """Separable eigenfunction: width-scaled oscillator functions.

    The x factor carries index n2 with width r_width, the eta factor index
    n1 with width s_width; both reduce to the standard phi_n at unit width.
    """
    if not (params.r_width > 0 and params.s_width > 0):
        raise ParameterError("width parameters must be positive")
    rw, sw = params.r_width, params.s_width
    fx = rw ** 0.25 * ho_wavefunction(n2, np.sqrt(rw) * np.asarray(x, dtype=float))
    feta = sw ** 0.25 * ho_wavefunction(n1, np.sqrt(sw) * np.asarray(eta, dtype=float))
    out = fx * feta
    return float(out) if np.ndim(out) == 0 else out


def _normalization(n, width):
    return width ** 0.25 / math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))


def _joint_quadrature(n1, n2, x, eta, params: CKParams, nodes: int) -> complex:
    u, w = np.polynomial.hermite.hermgauss(nodes)
    xi = math.sqrt(2.0) * u
    rw, sw = params.r_width, params.s_width
    shifted = eta + xi * params.gamma * math.sqrt(rw)
    integrand = (
        hermite_poly(n2, xi)
        * np.exp(1j * x * (xi * math.sqrt(rw) - params.sigma * eta))
        * np.exp(-0.5 * sw * shifted ** 2)
        * hermite_poly(n1, math.sqrt(sw) * shifted)
    )
    integral = math.sqrt(2.0) * np.sum(w * integrand)
    prefactor = _normalization(n1, sw) * _normalization(n2, rw) * (-1j) ** n2
    return complex(prefactor * integral)


def ck_joint_wavefunction(n1, n2, x, eta, params: CKParams, nodes: int = 64) -> complex:
    """Fourier-type joint wavefunction via Gauss-Hermite quadrature.

    The integral against the exp(-xi^2/2) weight is mapped onto the
    standard exp(-u^2) rule by xi = u sqrt(2). The node count is doubled
    internally and an AccuracyError is raised if the two evaluations differ
    by more than 1e-6 relative.
    """
    if nodes < 64:
        raise ParameterError(f"need at least 64 quadrature nodes, got {nodes}")
    coarse = _joint_quadrature(n1, n2, x, eta, params, nodes)
    fine = _joint_quadrature(n1, n2, x, eta, params, 2 * nodes)
    change = abs(fine - coarse)
    scale = max(abs(fine), abs(coarse))
    # the absolute floor keeps parity zeros from tripping the relative test
    if change > 1e-6 * scale and change > 1e-12:
        raise AccuracyError(
            f"quadrature not converged at {nodes} nodes "
            f"(change {change:.3e} on scale {scale:.3e})"
        )
    return fine


@dataclass(frozen=True)
class CKEvolution:
    """Superposition of stationary states with unit-modulus time phases."""

    terms: tuple[tuple[int, int, complex, float], ...]
    params: CKParams

    def total_probability(self) -> float:
        return float(sum(abs(u) ** 2 for _, _, u, _ in self.terms))

    def coefficients(self, tau: float):
        """Phased coefficients {(n1, n2): U exp(-i E tau)} at time tau."""
        return {
            (n1, n2): u * np.exp(-1j * energy * tau)
            for n1, n2, u, energy in self.terms
        }

    def __call__(self, x, eta, tau: float):
        out = 0.0 + 0.0j
        for n1, n2, u, energy in self.terms:
            out = out + u * np.exp(-1j * energy * tau) * ck_wavefunction(
                n1, n2, x, eta, self.params
            )
        return out


def ck_evolve(coeffs, params: CKParams, inputs: CKInputs) -> CKEvolution:
    """Build the time evolution of a finite superposition.

    ``coeffs`` maps (n1, n2) to a complex amplitude; the squared amplitudes
    must sum to 1 within 1e-9. Total probability is conserved for all tau
    because every time phase has unit modulus.
    """
    if not coeffs:
        raise NormalizationError("coefficient map is empty")
    total = sum(abs(u) ** 2 for u in coeffs.values())
    if abs(total - 1.0) > 1e-9:
        raise NormalizationError(
            f"squared coefficients sum to {total!r}, expected 1 within 1e-9"
        )
    terms = tuple(
        (n1, n2, complex(u), energy_level(n1, n2, params, inputs))
        for (n1, n2), u in sorted(coeffs.items())
    )
    return CKEvolution(terms=terms, params=params)
