"""qho: coupled quantum-harmonic-oscillator link simulator.

Library layout:

* :mod:`qho.special` — Hermite polynomials and oscillator eigenfunctions.
* :mod:`qho.field` — TEM beams, graded-index waveguide modes, residuals.
* :mod:`qho.ck` — Caldirola-Kanai coupled-oscillator solver.
* :mod:`qho.envelope` — received energy, two-window decomposition, densities.
* :mod:`qho.noise` — hybrid Gaussian/Poisson noise model.
* :mod:`qho.capacity` — channel-capacity formulas.
* :mod:`qho.config` / :mod:`qho.pipeline` / :mod:`qho.cli` — run orchestration.
"""

__version__ = "0.1.0"

from .capacity import (  # noqa: F401
    CapacityInputs,
    capacity_report,
    ea_capacity,
    fading_capacity,
    fock_capacity,
    g_entropy,
    holevo_capacity,
    shannon_capacity,
)
from .ck import CKInputs, CKParams, ck_evolve, ck_joint_wavefunction  # noqa: F401
from .ck import ck_wavefunction, derive_ck_params, energy_level  # noqa: F401
from .envelope import (  # noqa: F401
    EmpiricalDensity,
    EnvelopeDecomposition,
    EnvelopeSeries,
    decompose_envelope,
    envelope_density,
    estimate_density,
    moving_average,
    read_density_csv,
    received_energy,
    window_samples,
)
from .field import (  # noqa: F401
    ClusterConfig,
    FieldGrid,
    MediumParams,
    NormalModes,
    PhotonSpec,
    beam_geometry,
    cluster_hamiltonian_coeffs,
    electric_field_paraxial,
    paraxial_residual,
    propagate_cluster,
    propagate_single,
    read_field_csv,
    rotate_grid,
    rotation_angle,
    tem_mode,
    transverse_norm,
)
from .noise import HybridNoiseSpec, cross_psd, hybrid_density, hybrid_moments  # noqa: F401
from .special import N_MAX, hermite_poly, ho_wavefunction  # noqa: F401
