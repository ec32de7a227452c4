"""Command-line interface.

    qho <subcommand> [--config <path>] [--preset fig1|fig2] [--out <dir>]
        [--seed <u64>] [--emit csv,json,svg]

Subcommands: ``field``, ``envelope``, ``noise``, ``capacity``, ``pipeline``,
``selftest``. Exit codes: 0 success, 2 config syntax, 3 config invariant,
4 I/O, 5 numeric or parameter-regime error (stage named on stderr).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .capacity import (
    CapacityInputs,
    capacity_report,
    fading_capacity,
    fock_capacity,
    g_entropy,
    holevo_capacity,
    shannon_capacity,
)
from .config import PRESETS, RunConfig, build_config, parse_config
from .envelope import EmpiricalDensity, decompose_envelope, read_density_csv
from .errors import (
    EXIT_CONFIG_INVARIANT,
    EXIT_CONFIG_SYNTAX,
    EXIT_IO,
    EXIT_NUMERIC,
    EXIT_OK,
    ConfigError,
    ConfigSyntaxError,
    ParameterError,
    PipelineStageError,
)
from .noise import cross_psd
from .pipeline import (
    compute_densities,
    compute_envelope,
    compute_field,
    compute_noise,
    run_pipeline,
    _write_json,
    _write_noise_csv,
)
from .plotting import plot_density, plot_series


def _add_common(parser):
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--preset", choices=sorted(PRESETS),
                        help="built-in parameter set applied before --config")
    parser.add_argument("--out", help="output directory (default: config out_dir)")
    parser.add_argument("--seed", type=int, help="64-bit unsigned seed override")
    parser.add_argument("--emit", help="comma-separated families: csv,json,svg")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="qho",
        description="Coupled-oscillator quantum link simulator",
    )
    parser.add_argument("--version", action="version", version=f"qho {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("field", "compute the cluster propagation field and Hamiltonian record"),
        ("envelope", "compute the received-energy envelope and its densities"),
        ("noise", "evaluate the hybrid noise model"),
        ("capacity", "evaluate capacity formulas (no field computation)"),
        ("pipeline", "run every stage and write the hashed manifest"),
        ("selftest", "run built-in verification checks"),
    ):
        p = sub.add_parser(name, help=doc)
        _add_common(p)
        if name == "capacity":
            p.add_argument("--density", help="envelope density CSV for the fading average")
            p.add_argument("--sweep", action="store_true",
                           help="also write a signal-power sweep CSV")
    return parser


def _load_config(args) -> RunConfig:
    emit = tuple(args.emit.split(",")) if args.emit else None
    if args.config:
        return parse_config(args.config, preset=args.preset, seed=args.seed, emit=emit)
    return build_config(preset=args.preset, seed=args.seed, emit=emit)


def _classify(exc) -> int:
    if isinstance(exc, ConfigSyntaxError):
        return EXIT_CONFIG_SYNTAX
    if isinstance(exc, (ConfigError, ParameterError)):
        return EXIT_CONFIG_INVARIANT
    if isinstance(exc, FileNotFoundError):
        return EXIT_IO
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_NUMERIC


def _fail(exc) -> int:
    print(f"qho: {exc}", file=sys.stderr)
    if isinstance(exc, PipelineStageError):
        # config problems surface before stages run; inside a stage only
        # I/O keeps its own code, everything else is a numeric failure
        return _classify(exc.cause) if isinstance(exc.cause, OSError) else EXIT_NUMERIC
    return _classify(exc)


def _cmd_pipeline(args) -> int:
    cfg = _load_config(args)
    out = args.out or cfg.out_dir
    result = run_pipeline(cfg, out)
    print(f"wrote {len(result.files) + 1} files to {out}")
    return EXIT_OK


def _cmd_field(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    field = compute_field(cfg)
    if "csv" in cfg.emit:
        field.diagnostic.write_csv(out / "field_grid.csv")
        field.probe_line.write_csv(out / "probe_line.csv")
    if "json" in cfg.emit:
        field.diagnostic.write_sidecar(out / "field_grid.json", cfg.medium)
        field.probe_line.write_sidecar(out / "probe_line.json", cfg.medium)
        _write_json(out / "hamiltonian.json", field.hamiltonian)
    print(f"field grids written to {out}")
    return EXIT_OK


def _cmd_envelope(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    field = compute_field(cfg)
    env = compute_envelope(cfg, field)
    densities = compute_densities(cfg, env)
    if "csv" in cfg.emit:
        env.series.write_csv(
            out / "envelope.csv",
            small_scale=env.decomposition.small_scale,
            large_scale=env.decomposition.large_scale,
        )
        densities.small_scale.write_csv(out / "density_small_scale.csv")
        densities.large_scale.write_csv(out / "density_large_scale.csv")
        densities.envelope.write_csv(out / "density_envelope.csv")
    if "json" in cfg.emit:
        from .config import config_echo

        echo = config_echo(cfg)
        _write_json(
            out / "envelope.json",
            {
                "windows": echo["windows"],
                "probe": echo["grid"]["probe"],
                "seed": cfg.seed,
                "samples": int(env.series.z.size),
                "lambda_m": cfg.wavelength_m,
                "medium": echo["medium"],
                "mean_energy": env.mean_energy,
                "normalization": "small/large-scale components computed "
                                 "from the mean-normalized energy series",
            },
        )
    if "svg" in cfg.emit:
        plot_series(env.series.z, env.decomposition.large_scale,
                    out / "large_scale.svg", ylabel="large-scale envelope",
                    title="Large-scale envelope variation")
        plot_series(env.series.z, env.decomposition.small_scale,
                    out / "small_scale.svg", ylabel="small-scale envelope",
                    title="Small-scale envelope variation", color="C1")
        plot_density(densities.envelope, out / "envelope_density.svg",
                     xlabel="received envelope", title="Envelope distribution")
    print(f"envelope artifacts written to {out}")
    return EXIT_OK


def _cmd_noise(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report, (xs, pdf) = compute_noise(cfg)
    if "csv" in cfg.emit:
        _write_noise_csv(out / "noise_density.csv", xs, pdf)
    if "json" in cfg.emit:
        _write_json(out / "noise.json", report)
    print(f"noise artifacts written to {out}")
    return EXIT_OK


def _cmd_capacity(args) -> int:
    # never touches field computation: density (if any) comes from a file
    cfg = _load_config(args)
    out = Path(args.out or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    density = read_density_csv(args.density) if args.density else None
    psd = cross_psd(cfg.noise, 299792458.0 / cfg.wavelength_m,
                    cfg.capacity.bandwidth)
    report = capacity_report(
        cfg.capacity,
        density=density,
        noise_psd=psd if density is not None else None,
        ea_interpretation=cfg.ea_interpretation,
    )
    _write_json(out / "capacity.json", report)
    if args.sweep:
        _write_capacity_sweep(out / "capacity_sweep.csv", cfg, density, psd)
    print(f"capacity report written to {out}")
    return EXIT_OK


def _write_capacity_sweep(path, cfg: RunConfig, density, psd):
    base = cfg.capacity
    powers = np.logspace(-2, 2, 25) * max(base.signal_power, 1e-30)
    with open(path, "w", newline="") as fh:
        fh.write("param,value,C_shannon,C_F,C_H,C_E,C_cqc\n")
        for p in powers:
            inputs = CapacityInputs(
                bandwidth=base.bandwidth,
                signal_power=float(p),
                classical_noise_psd=base.classical_noise_psd,
                photon_energy=base.photon_energy,
                quantum_noise=base.quantum_noise,
                gain=base.gain,
            )
            report = capacity_report(inputs, density=density,
                                     noise_psd=psd if density is not None else None,
                                     ea_interpretation=cfg.ea_interpretation)
            row = [
                "signal_power_w",
                repr(float(p)),
                repr(report["shannon_bits_per_s"]),
                repr(report["fock_bits_per_s"]),
                repr(report["holevo_bits_per_s"]),
                repr(report["entanglement_assisted_bits_per_s"]),
                repr(report.get("fading_bits_per_s")),
            ]
            fh.write(",".join(row) + "\n")


def _selftest_checks():
    """(name, callable) pairs; each callable raises on failure."""
    from .field import MediumParams, paraxial_residual, propagate_single, tem_mode
    from .field import FieldGrid
    from .special import ho_wavefunction

    def orthonormality():
        nodes, weights = np.polynomial.hermite.hermgauss(48)
        for m in range(7):
            fm = ho_wavefunction(m, nodes) * np.exp(0.5 * nodes ** 2)
            for n in range(7):
                fn = ho_wavefunction(n, nodes) * np.exp(0.5 * nodes ** 2)
                val = np.sum(weights * fm * fn)
                expect = 1.0 if m == n else 0.0
                if abs(val - expect) > 1e-8:
                    raise AssertionError(
                        f"orthonormality failed at ({m},{n}): {val}"
                    )

    def waveguide_residual():
        params = MediumParams(lam=1.0, n0=1.45, k_x=1.2, k_y=1.5, g=0.25)
        res = []
        for n, nz in ((41, 17), (81, 33)):
            axes = np.linspace(-5.0, 5.0, n)
            z = np.linspace(0.0, 1.0, nz)
            grid = propagate_single(2, 2, axes, axes, z, params)
            res.append(paraxial_residual(grid, params, "waveguide"))
        order = np.log2(res[0] / res[1])
        if not 1.7 <= order <= 2.3:
            raise AssertionError(f"waveguide residual order {order:.3f} outside [1.7, 2.3]")

    def free_space_residual():
        lam, b = 1.3e-6, 1.0
        w0 = np.sqrt(lam * b / np.pi)
        params = MediumParams(lam=lam, n0=1.0, k_x=1.0, k_y=1.0, g=0.0)
        res = []
        for nt, nz in ((33, 17), (65, 33)):
            xs = np.linspace(-2 * w0, 2 * w0, nt)
            zs = np.linspace(0.0, 0.8 * b, nz)
            xm, ym, zm = np.meshgrid(xs, xs, zs, indexing="ij")
            grid = FieldGrid(x=xs, y=xs, z=zs, values=tem_mode(1, 0, xm, ym, zm, b, lam))
            res.append(paraxial_residual(grid, params, "free_space"))
        order = np.log2(res[0] / res[1])
        if not 1.7 <= order <= 2.3:
            raise AssertionError(f"free-space residual order {order:.3f} outside [1.7, 2.3]")

    def capacity_reductions():
        if g_entropy(0.0) != 0.0 or abs(g_entropy(1.0) - 2.0) > 1e-12:
            raise AssertionError("entropy kernel anchors failed")
        for power in np.linspace(0.1, 5.0, 7):
            inputs = CapacityInputs(
                bandwidth=2.0, signal_power=float(power),
                classical_noise_psd=0.5, photon_energy=1.0,
                quantum_noise=0.0, gain=1.0,
            )
            a, b_ = holevo_capacity(inputs), fock_capacity(inputs)
            if abs(a - b_) > 1e-12 * max(abs(a), 1.0):
                raise AssertionError("zero-noise unit-gain reduction failed")
        point = EmpiricalDensity(
            edges=np.array([1.0 - 1e-9, 1.0 + 1e-9]),
            probabilities=np.array([1.0]),
        )
        inputs = CapacityInputs(bandwidth=1.0, signal_power=3.0,
                                classical_noise_psd=1.0, photon_energy=1.0)
        if abs(fading_capacity(inputs, point, 1.0) - shannon_capacity(inputs)) > 1e-9:
            raise AssertionError("point-mass fading reduction failed")

    def ck_suite():
        from .ck import CKInputs, ck_wavefunction, derive_ck_params, energy_level

        inputs = CKInputs(omega=1.0, omega_c=1.0, quantization=4.0 * np.pi)
        params = derive_ck_params(inputs)
        xs = np.linspace(-14.0, 14.0, 8001) / np.sqrt(params.r_width)
        eta_factor = params.s_width ** 0.25 * ho_wavefunction(0, 0.0)
        for n in range(5):
            vals = ck_wavefunction(0, n, xs, 0.0, params) / eta_factor
            norm = np.trapezoid(vals ** 2, xs)
            if abs(norm - 1.0) > 1e-6:
                raise AssertionError(f"eigenfunction norm failed at n={n}: {norm}")
        levels = [
            energy_level(n1, 0, params, inputs) for n1 in range(5)
        ]
        second = np.diff(levels, 2)
        if np.max(np.abs(second)) > 1e-12:
            raise AssertionError("spectrum is not linear")

    def envelope_homogeneity():
        from .envelope import EnvelopeSeries

        z = np.linspace(0.0, 400.0, 3201)
        values = 1.0 + 0.5 * np.sin(2 * np.pi * z / 37.0) ** 2
        series = EnvelopeSeries(z=z, values=values, lam=1.0)
        scaled = EnvelopeSeries(z=z, values=4.0 * values, lam=1.0)
        a = decompose_envelope(series)
        b = decompose_envelope(scaled)
        if np.max(np.abs(b.small_scale - 2.0 * a.small_scale)) > 1e-12:
            raise AssertionError("small-scale homogeneity failed")
        if np.max(np.abs(b.large_scale - a.large_scale)) > 1e-12:
            raise AssertionError("large-scale invariance failed")

    return [
        ("orthonormality", orthonormality),
        ("waveguide-residual-order", waveguide_residual),
        ("free-space-residual-order", free_space_residual),
        ("capacity-reductions", capacity_reductions),
        ("ck-suite", ck_suite),
        ("envelope-homogeneity", envelope_homogeneity),
    ]


def _cmd_selftest(args) -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            check()
        except Exception as exc:  # report every check, keep going
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"PASS {name}")
    if failures:
        print(f"qho selftest: {failures} check(s) failed", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


_COMMANDS = {
    "pipeline": _cmd_pipeline,
    "field": _cmd_field,
    "envelope": _cmd_envelope,
    "noise": _cmd_noise,
    "capacity": _cmd_capacity,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        return handler(args)
    except Exception as exc:
        return _fail(exc)


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
