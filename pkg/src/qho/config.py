"""Run configuration: JSON schema, strict parsing, and the two presets.

A configuration is a single JSON document. Validation is strict: unknown
blocks or keys are rejected by name, because a typo in a physics parameter
would otherwise silently change results.

Length conventions: the waveguide-mode solver works in coordinates measured
in wavelengths (grid spans, probe point, windows), while ``medium.lambda_m``
carries the SI wavelength for reporting and the photon-energy scale. The
medium coefficients ``k_x``, ``k_y``, ``g`` are the field-equation values
in those wavelength-normalized units.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .capacity import CapacityInputs
from .errors import ConfigError, ConfigSyntaxError, ParameterError
from .field import ClusterConfig, MediumParams, PhotonSpec
from .noise import HybridNoiseSpec

PLANCK_HBAR = 1.0545718e-34  # J s
_SPEED_OF_LIGHT = 299792458.0

_EMIT_CHOICES = ("csv", "json", "svg")


@dataclass(frozen=True)
class GridConfig:
    """Transverse window, diagnostic slicing and probe placement (wavelengths)."""

    span: float = 5.0
    transverse_points: int = 41
    z_span: float = 2048.0
    samples_per_lambda: int = 8
    diagnostic_slices: int = 64
    probe: tuple[float, float] = (0.5, 0.5)

    def __post_init__(self):
        if not (self.span > 0 and self.z_span > 0):
            raise ParameterError("grid spans must be positive")
        if self.transverse_points < 5:
            raise ParameterError("need at least 5 transverse points")
        if self.samples_per_lambda < 1:
            raise ParameterError("need at least 1 sample per wavelength")
        if self.diagnostic_slices < 2:
            raise ParameterError("need at least 2 diagnostic slices")

    @property
    def hz(self) -> float:
        return 1.0 / self.samples_per_lambda


@dataclass(frozen=True)
class WindowConfig:
    short_lambda: float = 4.0
    long_lambda: float = 150.0
    small_scale_mode: str = "sqrt"

    def __post_init__(self):
        if not (0 < self.short_lambda < self.long_lambda):
            raise ParameterError("windows must satisfy 0 < short < long")
        if self.small_scale_mode not in ("sqrt", "ratio"):
            raise ParameterError(
                f"small_scale_mode must be 'sqrt' or 'ratio', got {self.small_scale_mode!r}"
            )


@dataclass(frozen=True)
class DensityConfig:
    bins: int | None = None
    product_mode: str = "pointwise"

    def __post_init__(self):
        if self.bins is not None and self.bins < 1:
            raise ParameterError("bins must be >= 1 when given")
        if self.product_mode not in ("pointwise", "product"):
            raise ParameterError(
                f"product_mode must be 'pointwise' or 'product', got {self.product_mode!r}"
            )


@dataclass(frozen=True)
class RunConfig:
    """Fully validated parameters of one simulation run."""

    medium: MediumParams
    wavelength_m: float
    cluster: ClusterConfig
    base_level: int
    grid: GridConfig
    windows: WindowConfig
    density: DensityConfig
    noise: HybridNoiseSpec
    capacity: CapacityInputs
    ea_interpretation: str
    seed: int
    out_dir: str
    emit: tuple[str, ...]
    raw: dict = dc_field(default_factory=dict, compare=False, repr=False)


def _photon_energy(wavelength_m: float) -> float:
    return PLANCK_HBAR * _SPEED_OF_LIGHT / wavelength_m


def _default_document() -> dict:
    wavelength_m = 1300e-9
    hf = _photon_energy(wavelength_m)
    return {
        "medium": {
            "lambda_m": wavelength_m,
            "n0": 1.45,
            "k_x": 1.2,
            "k_y": 1.5,
            "g": 0.25,
        },
        "cluster": {
            "n1": 4,
            "n2": 4,
            "base_level": 2,
            "levels": None,
            "mu": 0.0,
            "sigma_1": 0.0,
            "sigma_2": 0.0,
        },
        "grid": {
            "span": 5.0,
            "transverse_points": 41,
            "z_span": 2048.0,
            "samples_per_lambda": 8,
            "diagnostic_slices": 64,
            "probe": [0.5, 0.5],
        },
        "windows": {
            "short_lambda": 4.0,
            "long_lambda": 150.0,
            "small_scale_mode": "sqrt",
        },
        "density": {"bins": None, "product_mode": "pointwise"},
        "noise": {
            "sigma_g2": 1e-12,
            "mu_g": 0.0,
            "lambda_p": 1.0,
            "hbar_f": hf,
        },
        "capacity": {
            "bandwidth_hz": 1e6,
            "signal_power_w": 1e-3,
            "noise_psd_w_per_hz": 1e-12,
            "photon_energy_j": hf,
            "quantum_noise_j": 0.1 * hf,
            "gain": 1.0,
            "ea_interpretation": "printed",
        },
        "seed": 0,
        "out_dir": "qho_output",
        "emit": ["csv", "json", "svg"],
    }


PRESETS = {
    "fig1": {"medium": {"k_x": 1.2, "k_y": 1.5, "g": 0.25}},
    "fig2": {"medium": {"k_x": 3.5, "k_y": 5.0, "g": 0.5}},
}


def _merge(base: dict, overlay: dict) -> dict:
    out = dict(base)
    for key, value in overlay.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def _check_unknown_keys(document: dict, reference: dict, path="config"):
    for key, value in document.items():
        if key not in reference:
            raise ConfigError(f"unknown key '{key}' in {path}")
        if isinstance(value, dict):
            if not isinstance(reference[key], dict):
                raise ConfigError(f"key '{key}' in {path} must not be an object")
            _check_unknown_keys(value, reference[key], f"{path}.{key}")


def _build(document: dict) -> RunConfig:
    med = document["medium"]
    medium = MediumParams(
        lam=1.0,  # grid coordinates are in wavelengths
        n0=float(med["n0"]),
        k_x=float(med["k_x"]),
        k_y=float(med["k_y"]),
        g=float(med["g"]),
    )
    wavelength_m = float(med["lambda_m"])
    if not (wavelength_m > 0):
        raise ParameterError("medium.lambda_m must be positive")

    clu = document["cluster"]
    base_level = int(clu["base_level"])
    if clu.get("levels") is not None:
        groups = []
        for group in clu["levels"]:
            groups.append(tuple(PhotonSpec(int(p[0]), int(p[1])) for p in group))
        if len(groups) != 2:
            raise ParameterError("cluster.levels must list exactly two clusters")
        cluster = ClusterConfig(
            transmitter=groups[0], receiver=groups[1], mu=float(clu["mu"]),
            sigma_1=float(clu["sigma_1"]), sigma_2=float(clu["sigma_2"]),
        )
    else:
        cluster = ClusterConfig.staggered(
            int(clu["n1"]), int(clu["n2"]), base_level, mu=float(clu["mu"]),
            sigma_1=float(clu["sigma_1"]), sigma_2=float(clu["sigma_2"]),
        )

    gr = document["grid"]
    probe = gr["probe"]
    if not (isinstance(probe, (list, tuple)) and len(probe) == 2):
        raise ParameterError("grid.probe must be a [x, y] pair")
    grid = GridConfig(
        span=float(gr["span"]),
        transverse_points=int(gr["transverse_points"]),
        z_span=float(gr["z_span"]),
        samples_per_lambda=int(gr["samples_per_lambda"]),
        diagnostic_slices=int(gr["diagnostic_slices"]),
        probe=(float(probe[0]), float(probe[1])),
    )

    win = document["windows"]
    windows = WindowConfig(
        short_lambda=float(win["short_lambda"]),
        long_lambda=float(win["long_lambda"]),
        small_scale_mode=str(win["small_scale_mode"]),
    )

    den = document["density"]
    density = DensityConfig(
        bins=None if den["bins"] is None else int(den["bins"]),
        product_mode=str(den["product_mode"]),
    )

    noi = document["noise"]
    noise = HybridNoiseSpec(
        sigma_g2=float(noi["sigma_g2"]),
        mu_g=float(noi["mu_g"]),
        lambda_p=float(noi["lambda_p"]),
        quantum_scale=float(noi["hbar_f"]),
    )

    cap = document["capacity"]
    capacity = CapacityInputs(
        bandwidth=float(cap["bandwidth_hz"]),
        signal_power=float(cap["signal_power_w"]),
        classical_noise_psd=float(cap["noise_psd_w_per_hz"]),
        photon_energy=float(cap["photon_energy_j"]),
        quantum_noise=float(cap["quantum_noise_j"]),
        gain=float(cap["gain"]),
    )
    ea_interpretation = str(cap["ea_interpretation"])
    if ea_interpretation not in ("printed", "standard"):
        raise ParameterError(
            f"capacity.ea_interpretation must be 'printed' or 'standard', "
            f"got {ea_interpretation!r}"
        )

    seed = int(document["seed"])
    if seed < 0 or seed > 2 ** 64 - 1:
        raise ParameterError("seed must fit in an unsigned 64-bit integer")

    out_dir = str(document["out_dir"])

    emit = tuple(document["emit"])
    for flag in emit:
        if flag not in _EMIT_CHOICES:
            raise ParameterError(f"unknown emit flag {flag!r}; choose from {_EMIT_CHOICES}")

    return RunConfig(
        medium=medium,
        wavelength_m=wavelength_m,
        cluster=cluster,
        base_level=base_level,
        grid=grid,
        windows=windows,
        density=density,
        noise=noise,
        capacity=capacity,
        ea_interpretation=ea_interpretation,
        seed=seed,
        out_dir=out_dir,
        emit=emit,
        raw=document,
    )


def build_config(document: dict | None = None, preset: str | None = None,
                 seed: int | None = None, emit=None) -> RunConfig:
    """Assemble a RunConfig from defaults, an optional preset, and overrides."""
    merged = _default_document()
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset '{preset}'; choose from {sorted(PRESETS)}")
        merged = _merge(merged, PRESETS[preset])
    if document:
        _check_unknown_keys(document, _default_document())
        merged = _merge(merged, document)
    if seed is not None:
        merged["seed"] = seed
    if emit is not None:
        merged["emit"] = list(emit)
    return _build(merged)


def parse_config(path, preset: str | None = None, seed: int | None = None,
                 emit=None) -> RunConfig:
    """Load, strictly validate, and type a JSON configuration file."""
    with open(path) as fh:
        try:
            document = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigSyntaxError(f"{path}: {exc}") from exc
    if not isinstance(document, dict):
        raise ConfigSyntaxError(f"{path}: top level must be a JSON object")
    return build_config(document, preset=preset, seed=seed, emit=emit)


def config_echo(cfg: RunConfig) -> dict:
    """Canonical parameter echo for manifests and sidecars."""
    return {
        "medium": cfg.medium.as_dict() | {"lambda_m": cfg.wavelength_m},
        "cluster": {
            "n1": cfg.cluster.n1,
            "n2": cfg.cluster.n2,
            "base_level": cfg.base_level,
            "levels": [
                [[p.eps_x, p.eps_y] for p in cluster]
                for cluster in cfg.cluster.clusters()
            ],
            "mu": cfg.cluster.mu,
            "sigma_1": cfg.cluster.sigma_1,
            "sigma_2": cfg.cluster.sigma_2,
        },
        "grid": {
            "span": cfg.grid.span,
            "transverse_points": cfg.grid.transverse_points,
            "z_span": cfg.grid.z_span,
            "samples_per_lambda": cfg.grid.samples_per_lambda,
            "diagnostic_slices": cfg.grid.diagnostic_slices,
            "probe": list(cfg.grid.probe),
        },
        "windows": {
            "short_lambda": cfg.windows.short_lambda,
            "long_lambda": cfg.windows.long_lambda,
            "small_scale_mode": cfg.windows.small_scale_mode,
        },
        "density": {
            "bins": cfg.density.bins,
            "product_mode": cfg.density.product_mode,
        },
        "noise": {
            "sigma_g2": cfg.noise.sigma_g2,
            "mu_g": cfg.noise.mu_g,
            "lambda_p": cfg.noise.lambda_p,
            "hbar_f": cfg.noise.quantum_scale,
        },
        "capacity": {
            "bandwidth_hz": cfg.capacity.bandwidth,
            "signal_power_w": cfg.capacity.signal_power,
            "noise_psd_w_per_hz": cfg.capacity.classical_noise_psd,
            "photon_energy_j": cfg.capacity.photon_energy,
            "quantum_noise_j": cfg.capacity.quantum_noise,
            "gain": cfg.capacity.gain,
            "ea_interpretation": cfg.ea_interpretation,
        },
        "seed": cfg.seed,
        "out_dir": cfg.out_dir,
        "emit": list(cfg.emit),
    }
