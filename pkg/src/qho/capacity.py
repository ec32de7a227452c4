"""Channel-capacity formulas: classical, photon-counting, Gaussian-quantum
bounds, and the fading-averaged capacity over an empirical envelope density.

The photon-counting and Gaussian-bound expressions are dimensionless as
bracket expressions; this module returns them multiplied by the bandwidth
so every capacity is in bits/s, and also exposes the raw bracket values as
``*_spectral_efficiency`` for direct comparison.

All 0*log(0) limits are resolved to 0 through ``g_entropy``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .envelope import EmpiricalDensity
from .errors import NormalizationError, ParameterError, RegimeError


@dataclass(frozen=True)
class CapacityInputs:
    """Link parameters shared by the capacity expressions."""

    bandwidth: float
    signal_power: float
    classical_noise_psd: float
    photon_energy: float
    quantum_noise: float = 0.0
    gain: float = 1.0

    def __post_init__(self):
        if not (self.bandwidth > 0):
            raise ParameterError(f"bandwidth must be > 0, got {self.bandwidth}")
        if self.signal_power < 0:
            raise ParameterError(f"signal power must be >= 0, got {self.signal_power}")
        if self.classical_noise_psd < 0:
            raise ParameterError("classical noise PSD must be >= 0")
        if not (self.photon_energy > 0):
            raise ParameterError(f"photon energy must be > 0, got {self.photon_energy}")
        if self.quantum_noise < 0:
            raise ParameterError("quantum noise parameter must be >= 0")
        if not (self.gain > 0):
            raise ParameterError(f"gain must be > 0, got {self.gain}")

    @property
    def noise_occupancy(self) -> float:
        return self.quantum_noise / self.photon_energy

    @property
    def signal_occupancy(self) -> float:
        return self.signal_power * self.gain / (self.bandwidth * self.photon_energy)


def g_entropy(x: float) -> float:
    """(1+x) log2(1+x) - x log2(x), with the x -> 0 limit equal to 0.

    Strictly increasing and concave on x >= 0; the reusable kernel of the
    photon-counting and Gaussian-bound capacities.
    """
    if x < 0:
        raise ParameterError(f"g_entropy argument must be >= 0, got {x}")
    if x == 0.0:
        return 0.0
    return (1.0 + x) * math.log2(1.0 + x) - x * math.log2(x)


def shannon_capacity(inputs: CapacityInputs) -> float:
    """Classical band-limited AWGN capacity B log2(1 + S/(N0 B)) in bits/s."""
    noise_power = inputs.classical_noise_psd * inputs.bandwidth
    if inputs.signal_power == 0.0:
        return 0.0
    if noise_power == 0.0:
        raise RegimeError("zero noise power with positive signal: capacity unbounded")
    return inputs.bandwidth * math.log2(1.0 + inputs.signal_power / noise_power)


def fock_spectral_efficiency(inputs: CapacityInputs) -> float:
    return g_entropy(inputs.signal_power / (inputs.photon_energy * inputs.bandwidth))


def fock_capacity(inputs: CapacityInputs) -> float:
    """Photon-number-state capacity B g(S/(hf B)) in bits/s.

    The bracket expression alone is dimensionless; the bandwidth factor
    restores bits/s (see ``fock_spectral_efficiency`` for the raw bracket).
    """
    return inputs.bandwidth * fock_spectral_efficiency(inputs)


def holevo_spectral_efficiency(inputs: CapacityInputs) -> float:
    lifted = (
        inputs.quantum_noise * inputs.bandwidth + inputs.signal_power * inputs.gain
    ) / (inputs.photon_energy * inputs.bandwidth)
    return g_entropy(lifted) - g_entropy(inputs.noise_occupancy)


def holevo_capacity(inputs: CapacityInputs) -> float:
    """Gaussian-channel upper bound, B [g((NB + S chi)/(hf B)) - g(N/hf)].

    Reduces to ``fock_capacity`` at zero quantum noise and unit gain.
    """
    return inputs.bandwidth * holevo_spectral_efficiency(inputs)


def _ea_terms(zeta_n: float, zeta_u: float, gain: float):
    radicand = (2.0 * zeta_n + zeta_u + 1.0) ** 2 - 4.0 * gain * zeta_n * (zeta_n + 1.0)
    if radicand < 0:
        threshold = (2.0 * zeta_n + zeta_u + 1.0) ** 2 / (
            4.0 * zeta_n * (zeta_n + 1.0)
        )
        raise RegimeError(
            f"entanglement-assisted discriminant is negative; requires gain <= "
            f"{threshold:.6g}, got {gain:.6g}"
        )
    root = math.sqrt(radicand)
    d_plus = 0.5 * (root - 1.0 + zeta_u)
    d_minus = 0.5 * (root - 1.0 - zeta_u)
    # exact algebraic zeros (e.g. zeta_u = 0, gain = 1) leave float dust
    dust = 1e-12 * max(1.0, zeta_n, zeta_u)
    d_plus = 0.0 if abs(d_plus) < dust else d_plus
    d_minus = 0.0 if abs(d_minus) < dust else d_minus
    if d_plus < 0 or d_minus < 0:
        raise RegimeError(
            f"assisted-bound occupancies fell below zero "
            f"(D+ = {d_plus:.6g}, D- = {d_minus:.6g}); formula undefined here"
        )
    return d_plus, d_minus


def ea_spectral_efficiency(inputs: CapacityInputs, interpretation: str = "printed") -> float:
    """Entanglement-assisted bound bracket, two documented symbol readings.

    "printed" keeps the noise occupancy in the leading slots, which makes
    the bound vanish at zero quantum noise (physically suspicious but kept
    verbatim). "standard" swaps the signal occupancy into those slots, the
    conventional form. Neither mode replaces the other implicitly.
    """
    zeta_n = inputs.noise_occupancy
    zeta_u = inputs.signal_occupancy
    if interpretation == "printed":
        lead, other = zeta_n, zeta_u
    elif interpretation == "standard":
        lead, other = zeta_u, zeta_n
    else:
        raise ParameterError(f"unknown interpretation {interpretation!r}")
    d_plus, d_minus = _ea_terms(lead, other, inputs.gain)
    return (
        g_entropy(lead)
        + g_entropy(lead + other)
        - g_entropy(d_plus)
        - g_entropy(d_minus)
    )


def ea_capacity(inputs: CapacityInputs, interpretation: str = "printed") -> float:
    """Entanglement-assisted capacity in bits/s (bandwidth times bracket)."""
    return inputs.bandwidth * ea_spectral_efficiency(inputs, interpretation)


def fading_capacity(inputs: CapacityInputs, density: EmpiricalDensity,
                    noise_psd: float) -> float:
    """Capacity averaged over an empirical envelope density.

    Sum over bins of B log2(1 + r^2 S / (N_psd B)) p(bin), with r the bin
    midpoint: the SNR change of variables gamma = r^2 S / N applied to the
    histogram of the envelope.
    """
    if not (noise_psd > 0):
        raise ParameterError(f"noise spectral level must be > 0, got {noise_psd}")
    if not density.normalized or abs(density.probabilities.sum() - 1.0) > 1e-9:
        raise NormalizationError("envelope density must be normalized")
    snr_scale = inputs.signal_power / (noise_psd * inputs.bandwidth)
    r = density.midpoints
    rates = inputs.bandwidth * np.log2(1.0 + r * r * snr_scale)
    return float(np.sum(rates * density.probabilities))


def capacity_report(inputs: CapacityInputs, density: EmpiricalDensity | None = None,
                    noise_psd: float | None = None,
                    ea_interpretation: str = "printed") -> dict:
    """All capacity figures plus parameter-regime flags, JSON-friendly."""
    report = {
        "inputs": {
            "bandwidth_hz": inputs.bandwidth,
            "signal_power_w": inputs.signal_power,
            "classical_noise_psd": inputs.classical_noise_psd,
            "photon_energy_j": inputs.photon_energy,
            "quantum_noise_j": inputs.quantum_noise,
            "gain": inputs.gain,
            "ea_interpretation": ea_interpretation,
        },
        "flags": {},
    }
    try:
        report["shannon_bits_per_s"] = shannon_capacity(inputs)
    except RegimeError as exc:
        report["shannon_bits_per_s"] = None
        report["flags"]["shannon"] = str(exc)
    report["fock_bits_per_s"] = fock_capacity(inputs)
    report["holevo_bits_per_s"] = holevo_capacity(inputs)
    try:
        report["entanglement_assisted_bits_per_s"] = ea_capacity(
            inputs, ea_interpretation
        )
    except RegimeError as exc:
        report["entanglement_assisted_bits_per_s"] = None
        report["flags"]["entanglement_assisted"] = str(exc)
    if density is not None and noise_psd is not None:
        report["fading_bits_per_s"] = fading_capacity(inputs, density, noise_psd)
        report["inputs"]["noise_psd"] = noise_psd
    return report
