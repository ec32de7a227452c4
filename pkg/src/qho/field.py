"""Transverse modes, waveguide propagation fields, and PDE residual checks.

Two families live here:

* Free-space Gaussian-beam (TEM) modes with the usual w(z), curvature and
  Gouy-phase evolution, governed by the paraxial free-space equation
  ``psi_xx + psi_yy + 2 i k psi_z = 0``.

* Bound modes of a quadratic graded-index medium, governed by the waveguide
  equation ``2 i k0 E_z = lap_perp E + (k0^2 - k_x x^2 - k_y y^2 + 2 g x y) E``.
  These are rotated oscillator eigenfunctions whose z-dependence is a pure
  phase, so their modulus is independent of propagation distance.

Units: all lengths are in the unit system of the grid axes. For the
graded-index pipeline the natural choice is *wavelengths* (construct
``MediumParams`` with ``lam=1.0``), which keeps the medium coefficients and
the mode widths of order one; beam-geometry helpers are routinely used with
SI meters instead. The constructor invariant ``k0 = 2 pi n0 / lam`` holds in
either convention.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .errors import DefinitenessError, GridError, ParameterError
from .special import N_MAX, ho_wavefunction

SPEED_OF_LIGHT = 299792458.0  # m/s


@dataclass(frozen=True)
class MediumParams:
    """Medium and carrier constants of the quadratic-index waveguide.

    ``k_x``, ``k_y`` and ``g`` are the transverse curvature coefficients of
    the index profile; the form k_x x^2 + k_y y^2 - 2 g x y must be positive
    definite for bound modes to exist.
    """

    lam: float
    n0: float
    k_x: float
    k_y: float
    g: float = 0.0

    def __post_init__(self):
        if not (self.lam > 0):
            raise ParameterError(f"wavelength must be positive, got {self.lam}")
        if self.n0 < 1.0:
            raise ParameterError(f"refractive index must be >= 1, got {self.n0}")
        if not (self.k_x > 0 and self.k_y > 0):
            raise ParameterError("transverse coefficients k_x, k_y must be positive")
        if not (self.k_x * self.k_y > self.g ** 2):
            raise DefinitenessError(
                f"k_x*k_y = {self.k_x * self.k_y:.6g} must exceed g^2 = "
                f"{self.g ** 2:.6g} for a positive-definite transverse form"
            )

    @property
    def k0(self) -> float:
        """Carrier wavenumber, 2 pi n0 / lam (units of 1/length)."""
        return 2.0 * math.pi * self.n0 / self.lam

    def as_dict(self):
        return {
            "lam": self.lam,
            "n0": self.n0,
            "k_x": self.k_x,
            "k_y": self.k_y,
            "g": self.g,
            "k0": self.k0,
        }


@dataclass(frozen=True)
class NormalModes:
    """Principal-axis decomposition of the transverse quadratic form."""

    theta: float
    omega_x: float
    omega_y: float
    kappa_plus: float
    kappa_minus: float


def rotation_angle(params: MediumParams) -> NormalModes:
    """Diagonalize the transverse form and return its normal-mode constants.

    theta = atan2(2g, k_x - k_y)/2, so the degenerate case k_x = k_y is
    well-defined (theta = +-pi/4 for g != 0, theta = 0 for g = 0).
    The eigenvalues are kappa_pm = (k_x+k_y)/2 +- sqrt(((k_x-k_y)/2)^2 + g^2)
    and the associated oscillator frequencies are omega_x = sqrt(kappa_minus),
    omega_y = sqrt(kappa_plus).
    """
    theta = 0.5 * math.atan2(2.0 * params.g, params.k_x - params.k_y)
    mean = 0.5 * (params.k_x + params.k_y)
    disc = math.hypot(0.5 * (params.k_x - params.k_y), params.g)
    kappa_plus = mean + disc
    kappa_minus = mean - disc
    if kappa_minus <= 0:
        raise DefinitenessError(
            f"smallest eigenvalue of the transverse form is {kappa_minus:.6g} <= 0"
        )
    return NormalModes(
        theta=theta,
        omega_x=math.sqrt(kappa_minus),
        omega_y=math.sqrt(kappa_plus),
        kappa_plus=kappa_plus,
        kappa_minus=kappa_minus,
    )


@dataclass(frozen=True)
class BeamGeometry:
    """Gaussian-beam geometry at a single propagation distance.

    ``curvature`` is 1/R(z); the on-waist value R(0) = infinity is
    represented as curvature 0.
    """

    z: float
    rayleigh_range: float
    waist: float
    width: float
    curvature: float
    gouy: float

    @property
    def radius_of_curvature(self) -> float:
        return math.inf if self.curvature == 0.0 else 1.0 / self.curvature


def beam_geometry(z: float, b: float, lam: float) -> BeamGeometry:
    """Beam width, wavefront curvature and Gouy phase at distance z.

    w0 = sqrt(lam*b/pi), w(z) = w0*sqrt(1+(z/b)^2), 1/R(z) = z/(z^2+b^2),
    gouy(z) = atan(z/b).
    """
    if not (b > 0):
        raise ParameterError(f"Rayleigh range must be positive, got {b}")
    if not (lam > 0):
        raise ParameterError(f"wavelength must be positive, got {lam}")
    w0 = math.sqrt(lam * b / math.pi)
    ratio = z / b
    return BeamGeometry(
        z=z,
        rayleigh_range=b,
        waist=w0,
        width=w0 * math.sqrt(1.0 + ratio * ratio),
        curvature=z / (z * z + b * b),
        gouy=math.atan(ratio),
    )


def tem_mode(l, m, x, y, z, b, lam):
    """Complex TEM_{lm} free-space mode value(s) at (x, y, z).

    (w0/w) phi_l(sqrt2 x/w) phi_m(sqrt2 y/w) exp(ik(x^2+y^2)/(2R))
    exp(-i(l+m+1) gouy), with vacuum carrier k = 2 pi / lam. Broadcasts
    over array arguments.
    """
    k = 2.0 * math.pi / lam
    x, y, z = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float), np.asarray(z, dtype=float)
    )
    w0 = math.sqrt(lam * b / math.pi)
    width = w0 * np.sqrt(1.0 + (z / b) ** 2)
    curvature = z / (z * z + b * b)
    gouy = np.arctan(z / b)
    value = (
        (w0 / width)
        * ho_wavefunction(l, np.sqrt(2.0) * x / width)
        * ho_wavefunction(m, np.sqrt(2.0) * y / width)
        * np.exp(0.5j * k * (x * x + y * y) * curvature)
        * np.exp(-1j * (l + m + 1) * gouy)
    )
    return complex(value) if value.ndim == 0 else value


def _uniform_spacing(axis, name):
    axis = np.asarray(axis, dtype=float)
    if axis.ndim != 1 or axis.size < 1:
        raise GridError(f"{name}-axis must be a 1-D array with at least one sample")
    if axis.size == 1:
        return 1.0
    steps = np.diff(axis)
    if not (steps > 0).all():
        raise GridError(f"{name}-axis must be strictly increasing")
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise GridError(f"{name}-axis must be uniformly spaced")
    return float(steps[0])


@dataclass
class FieldGrid:
    """Complex field samples on a rectilinear (x, y, z) grid."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.z = np.asarray(self.z, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        for axis, name in ((self.x, "x"), (self.y, "y"), (self.z, "z")):
            _uniform_spacing(axis, name)
        expected = (self.x.size, self.y.size, self.z.size)
        if self.values.shape != expected:
            raise GridError(
                f"value array shape {self.values.shape} does not match axes {expected}"
            )
        if not (np.all(np.isfinite(self.values.real))
                and np.all(np.isfinite(self.values.imag))):
            raise GridError("field samples must be finite")

    @property
    def hx(self) -> float:
        return _uniform_spacing(self.x, "x")

    @property
    def hy(self) -> float:
        return _uniform_spacing(self.y, "y")

    @property
    def hz(self) -> float:
        return _uniform_spacing(self.z, "z")

    def write_csv(self, path):
        """One node per row, ``x,y,z,re,im``; z slowest, then y, then x."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "z", "re", "im"])
            for iz, zv in enumerate(self.z):
                for iy, yv in enumerate(self.y):
                    for ix, xv in enumerate(self.x):
                        v = self.values[ix, iy, iz]
                        writer.writerow(
                            [repr(float(xv)), repr(float(yv)), repr(float(zv)),
                             repr(float(v.real)), repr(float(v.imag))]
                        )

    def sidecar(self, medium: MediumParams | None = None, length_unit="wavelength"):
        meta = {
            "axes": {
                "x": [float(self.x[0]), float(self.x[-1]), int(self.x.size)],
                "y": [float(self.y[0]), float(self.y[-1]), int(self.y.size)],
                "z": [float(self.z[0]), float(self.z[-1]), int(self.z.size)],
            },
            "spacing": {"hx": self.hx, "hy": self.hy, "hz": self.hz},
            "length_unit": length_unit,
        }
        if medium is not None:
            meta["medium"] = medium.as_dict()
        return meta

    def write_sidecar(self, path, medium: MediumParams | None = None,
                      length_unit="wavelength"):
        with open(path, "w") as fh:
            json.dump(self.sidecar(medium, length_unit), fh, indent=2, sort_keys=True)
            fh.write("\n")


def read_field_csv(path) -> FieldGrid:
    """Rebuild a FieldGrid from its CSV serialization."""
    xs, ys, zs, res, ims = [], [], [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["x", "y", "z", "re", "im"]:
            raise GridError(f"unexpected field CSV header {header}")
        for row in reader:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
            zs.append(float(row[2]))
            res.append(float(row[3]))
            ims.append(float(row[4]))
    x = np.unique(np.asarray(xs))
    y = np.unique(np.asarray(ys))
    z = np.unique(np.asarray(zs))
    values = (np.asarray(res) + 1j * np.asarray(ims)).reshape(
        z.size, y.size, x.size
    ).transpose(2, 1, 0)
    return FieldGrid(x=x, y=y, z=z, values=values)


def electric_field_paraxial(grid: FieldGrid, params: MediumParams, omega: float):
    """Transverse/longitudinal electric-field components of an envelope.

    Returns the pair (E_x, E_z) at t = 0:
    E_x = Re{omega * psi * e^(i k z)} and
    E_z = Re{i c (d psi/d x) e^(i k z)}, with the x-derivative taken by
    second-order central differences (one-sided at the x boundaries).
    """
    if grid.x.size < 3:
        raise GridError("need at least 3 x-samples for the longitudinal component")
    psi = grid.values
    hx = grid.hx
    dpsi = np.empty_like(psi)
    dpsi[1:-1] = (psi[2:] - psi[:-2]) / (2.0 * hx)
    # second-order one-sided stencils at the boundaries
    dpsi[0] = (-3.0 * psi[0] + 4.0 * psi[1] - psi[2]) / (2.0 * hx)
    dpsi[-1] = (3.0 * psi[-1] - 4.0 * psi[-2] + psi[-3]) / (2.0 * hx)
    carrier = np.exp(1j * params.k0 * grid.z)[None, None, :]
    e_x = np.real(omega * psi * carrier)
    e_z = np.real(1j * SPEED_OF_LIGHT * dpsi * carrier)
    return e_x, e_z


def _mode_profile(eps_x, eps_y, xmesh, ymesh, modes: NormalModes):
    """Unit-norm transverse eigenmode of the quadratic-index medium.

    Coordinates are rotated onto the principal axes of the transverse form;
    the eps_x ladder rides the kappa_minus axis and the eps_y ladder the
    kappa_plus axis. That assignment (and the rotation sign) is the one
    fixed by requiring the waveguide-equation residual of the propagated
    field to vanish; the alternative pairing fails the same check.
    """
    c, s = math.cos(modes.theta), math.sin(modes.theta)
    axis_minus = xmesh * s + ymesh * c
    axis_plus = xmesh * c - ymesh * s
    norm = (modes.omega_x * modes.omega_y) ** 0.25
    return (
        norm
        * ho_wavefunction(eps_x, math.sqrt(modes.omega_x) * axis_minus)
        * ho_wavefunction(eps_y, math.sqrt(modes.omega_y) * axis_plus)
    )


def _phase_rate(eps_x, eps_y, modes: NormalModes, k0: float) -> float:
    """z-phase rate of a bound mode: carrier plus mode-dependent advance.

    The half-weighted (omega_x + omega_y)/2 zero-point term is what makes
    the field an exact solution of the waveguide equation.
    """
    return -0.5 * k0 + (
        0.5 * (modes.omega_x + modes.omega_y)
        + eps_x * modes.omega_x
        + eps_y * modes.omega_y
    ) / k0


def _checked_level(n, label):
    if not isinstance(n, (int, np.integer)) or n < 0 or n > N_MAX:
        raise ParameterError(f"{label} must be an integer in [0, {N_MAX}], got {n!r}")
    return int(n)


def propagate_single(eps_x, eps_y, x, y, z, params: MediumParams) -> FieldGrid:
    """Propagation field of one bound mode on the given grid axes.

    All z-dependence is a unit-modulus phase, so |E| at any transverse
    point is independent of z.
    """
    eps_x = _checked_level(eps_x, "eps_x")
    eps_y = _checked_level(eps_y, "eps_y")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    modes = rotation_angle(params)
    xmesh, ymesh = np.meshgrid(x, y, indexing="ij")
    profile = _mode_profile(eps_x, eps_y, xmesh, ymesh, modes)
    mu = _phase_rate(eps_x, eps_y, modes, params.k0)
    values = profile[:, :, None] * np.exp(1j * mu * z)[None, None, :]
    return FieldGrid(x=x, y=y, z=z, values=values)


@dataclass(frozen=True)
class PhotonSpec:
    """One photon of a cluster: energy levels plus optional medium override."""

    eps_x: int
    eps_y: int
    k_x: float | None = None
    k_y: float | None = None


@dataclass(frozen=True)
class ClusterConfig:
    """Transmitter/receiver photon clusters and their entanglement strengths."""

    transmitter: tuple[PhotonSpec, ...]
    receiver: tuple[PhotonSpec, ...]
    mu: float = 0.0
    sigma_1: float = 0.0
    sigma_2: float = 0.0

    def __post_init__(self):
        if len(self.transmitter) < 1 or len(self.receiver) < 1:
            raise ParameterError("each cluster needs at least one photon")
        for value, name in ((self.mu, "mu"), (self.sigma_1, "sigma_1"),
                            (self.sigma_2, "sigma_2")):
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value}")
        for i, cluster in enumerate(self.clusters(), start=1):
            for j, photon in enumerate(cluster, start=1):
                try:
                    _checked_level(photon.eps_x, "eps_x")
                    _checked_level(photon.eps_y, "eps_y")
                except ParameterError as exc:
                    raise ParameterError(f"photon (i={i}, j={j}): {exc}") from exc

    @property
    def n1(self) -> int:
        return len(self.transmitter)

    @property
    def n2(self) -> int:
        return len(self.receiver)

    def clusters(self):
        return (self.transmitter, self.receiver)

    @classmethod
    def staggered(cls, n1, n2, base_level, mu=0.0, sigma_1=0.0, sigma_2=0.0):
        """Clusters whose photons alternate the level pairs
        (base+1, base) and (base, base+1).

        All-identical levels would make the summed field's modulus exactly
        constant in z; the swapped pairs beat against each other at the slow
        |omega_x - omega_y| rate only, which keeps the large-scale envelope
        below the long-window spatial frequency.
        """
        base = _checked_level(base_level, "base_level")

        def ladder(n):
            return tuple(
                PhotonSpec(base + 1, base) if j % 2 == 0 else PhotonSpec(base, base + 1)
                for j in range(n)
            )

        return cls(transmitter=ladder(n1), receiver=ladder(n2), mu=mu,
                   sigma_1=sigma_1, sigma_2=sigma_2)


def _photon_medium(photon: PhotonSpec, params: MediumParams, where: str) -> MediumParams:
    k_x = params.k_x if photon.k_x is None else photon.k_x
    k_y = params.k_y if photon.k_y is None else photon.k_y
    try:
        return MediumParams(lam=params.lam, n0=params.n0, k_x=k_x, k_y=k_y, g=params.g)
    except ParameterError as exc:
        raise ParameterError(f"photon {where}: {exc}") from exc


def propagate_cluster(cfg: ClusterConfig, x, y, z, params: MediumParams) -> FieldGrid:
    """Superposition of all cluster photons' bound modes on a shared grid."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    total = np.zeros((x.size, y.size, z.size), dtype=complex)
    for i, cluster in enumerate(cfg.clusters(), start=1):
        for j, photon in enumerate(cluster, start=1):
            where = f"(i={i}, j={j})"
            medium = _photon_medium(photon, params, where)
            term = propagate_single(photon.eps_x, photon.eps_y, x, y, z, medium)
            total += term.values
    return FieldGrid(x=x, y=y, z=z, values=total)


@dataclass(frozen=True)
class PotentialCoeffs:
    """Per-photon quadratic potential coefficients (inside the 1/k0 bracket)."""

    const: float
    x2: float
    y2: float
    xy: float


@dataclass(frozen=True)
class HamiltonianCoeffs:
    """Assembled scalar coefficients of the two-cluster oscillator Hamiltonian."""

    kinetic: float
    potential_prefactor: float
    potentials: tuple[tuple[PotentialCoeffs, ...], tuple[PotentialCoeffs, ...]]
    inter_cluster: float
    intra_cluster: tuple[tuple[int, int, float], ...]

    def quadratic_form_matrix(self) -> np.ndarray:
        """Symmetric matrix of the coordinate-quadratic part.

        Basis ordering: (cluster, photon, axis) with axis in (x, y), photons
        in declaration order, transmitter cluster first.
        """
        blocks = [len(c) for c in self.potentials]
        dim = 2 * sum(blocks)
        mat = np.zeros((dim, dim))
        offset = 0
        for ci, cluster in enumerate(self.potentials):
            for pj, pot in enumerate(cluster):
                ix = offset + 2 * pj
                iy = ix + 1
                mat[ix, ix] += -self.potential_prefactor * pot.x2
                mat[iy, iy] += -self.potential_prefactor * pot.y2
                half = -self.potential_prefactor * pot.xy / 2.0
                mat[ix, iy] += half
                mat[iy, ix] += half
            offset += 2 * blocks[ci]
        for ci, pj, strength in self.intra_cluster:
            base = 0 if ci == 1 else 2 * blocks[0]
            ix = base + 2 * (pj - 1)
            iy = ix + 1
            mat[ix, iy] += strength / 2.0
            mat[iy, ix] += strength / 2.0
        return mat


def cluster_hamiltonian_coeffs(cfg: ClusterConfig, params: MediumParams) -> HamiltonianCoeffs:
    """Collect the scalar coefficients of the coupled-cluster Hamiltonian.

    Per photon: kinetic prefactor 1/(2 k0) and bracket coefficients
    (k0^2/2, k_x/2, k_y/2, g/2) scaled by 1/k0; the inter-cluster term is
    the single scalar mu * sum over photon pairs of k_x1 k_y1 k_x2 k_y2;
    intra-cluster couplings are listed per photon as (cluster, photon,
    sigma_i) x-y pairs. With mu = 0 and sigma_i = 0 the coupling entries
    are absent and the record reduces to independent 2-D oscillators.
    """
    k0 = params.k0
    potentials = []
    for cluster in cfg.clusters():
        entries = []
        for photon in cluster:
            k_x = params.k_x if photon.k_x is None else photon.k_x
            k_y = params.k_y if photon.k_y is None else photon.k_y
            entries.append(
                PotentialCoeffs(const=0.5 * k0 * k0, x2=0.5 * k_x, y2=0.5 * k_y,
                                xy=0.5 * params.g)
            )
        potentials.append(tuple(entries))
    inter = 0.0
    if cfg.mu != 0.0:
        for p1 in cfg.transmitter:
            kx1 = params.k_x if p1.k_x is None else p1.k_x
            ky1 = params.k_y if p1.k_y is None else p1.k_y
            for p2 in cfg.receiver:
                kx2 = params.k_x if p2.k_x is None else p2.k_x
                ky2 = params.k_y if p2.k_y is None else p2.k_y
                inter += kx1 * ky1 * kx2 * ky2
        inter *= cfg.mu
    intra = []
    for ci, (cluster, sigma) in enumerate(
        zip(cfg.clusters(), (cfg.sigma_1, cfg.sigma_2)), start=1
    ):
        if sigma == 0.0:
            continue
        for pj in range(1, len(cluster) + 1):
            intra.append((ci, pj, sigma))
    return HamiltonianCoeffs(
        kinetic=0.5 / k0,
        potential_prefactor=1.0 / k0,
        potentials=(potentials[0], potentials[1]),
        inter_cluster=inter,
        intra_cluster=tuple(intra),
    )


def paraxial_residual(grid: FieldGrid, params: MediumParams, equation: str) -> float:
    """RMS PDE residual of a sampled field, normalized by the field RMS.

    ``equation`` selects the operator:

    * ``"free_space"``:  psi_xx + psi_yy + 2 i k0 psi_z
    * ``"waveguide"``:   2 i k0 E_z - lap_perp E - (k0^2 - k_x x^2
      - k_y y^2 + 2 g x y) E

    Derivatives are second-order central differences at interior nodes, so
    the residual of an exact solution decreases as O(h^2) under refinement.
    """
    if equation not in ("free_space", "waveguide"):
        raise ParameterError(f"unknown equation selector {equation!r}")
    for axis in (grid.x, grid.y, grid.z):
        if axis.size < 5:
            raise GridError("residual check needs at least 5 samples per axis")
    E = grid.values
    hx, hy, hz = grid.hx, grid.hy, grid.hz
    lap_x = (E[2:, 1:-1, 1:-1] - 2.0 * E[1:-1, 1:-1, 1:-1] + E[:-2, 1:-1, 1:-1]) / hx ** 2
    lap_y = (E[1:-1, 2:, 1:-1] - 2.0 * E[1:-1, 1:-1, 1:-1] + E[1:-1, :-2, 1:-1]) / hy ** 2
    dz = (E[1:-1, 1:-1, 2:] - E[1:-1, 1:-1, :-2]) / (2.0 * hz)
    k0 = params.k0
    if equation == "free_space":
        res = lap_x + lap_y + 2j * k0 * dz
    else:
        xmesh, ymesh = np.meshgrid(grid.x[1:-1], grid.y[1:-1], indexing="ij")
        k_sq = (
            k0 * k0
            - (params.k_x * xmesh ** 2 + params.k_y * ymesh ** 2)
            + 2.0 * params.g * xmesh * ymesh
        )
        res = 2j * k0 * dz - lap_x - lap_y - k_sq[:, :, None] * E[1:-1, 1:-1, 1:-1]
    interior = E[1:-1, 1:-1, 1:-1]
    scale = np.sqrt(np.mean(np.abs(interior) ** 2))
    if scale == 0.0:
        raise GridError("field is identically zero on the interior")
    return float(np.sqrt(np.mean(np.abs(res) ** 2)) / scale)


def transverse_norm(grid: FieldGrid) -> np.ndarray:
    """Trapezoid-rule L2 norm of each z-slice: integral of |E|^2 dx dy."""
    density = np.abs(grid.values) ** 2
    inner = np.trapezoid(density, grid.y, axis=1)
    return np.trapezoid(inner, grid.x, axis=0)


def rotate_grid(values: np.ndarray, x, y, theta: float) -> np.ndarray:
    """Resample a 2-D field on coordinates rotated by ``theta``.

    Bicubic-spline interpolation; points that leave the sampled window are
    set to zero, which is adequate for fields that decay inside the window.
    Applying ``theta`` then ``-theta`` reproduces a band-limited input up to
    interpolation error.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    values = np.asarray(values)
    c, s = math.cos(theta), math.sin(theta)
    xmesh, ymesh = np.meshgrid(x, y, indexing="ij")
    xr = xmesh * c - ymesh * s
    yr = xmesh * s + ymesh * c
    inside = (
        (xr >= x[0]) & (xr <= x[-1]) & (yr >= y[0]) & (yr <= y[-1])
    )
    xr_c = np.clip(xr, x[0], x[-1])
    yr_c = np.clip(yr, y[0], y[-1])

    def interp(component):
        spline = RectBivariateSpline(x, y, component, kx=3, ky=3)
        out = spline.ev(xr_c.ravel(), yr_c.ravel()).reshape(values.shape)
        return np.where(inside, out, 0.0)

    if np.iscomplexobj(values):
        return interp(values.real) + 1j * interp(values.imag)
    return interp(values)
