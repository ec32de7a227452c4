import json

import pytest

from qho.cli import main
from qho.config import build_config, config_echo, parse_config
from qho.errors import (
    EXIT_CONFIG_INVARIANT,
    EXIT_CONFIG_SYNTAX,
    EXIT_IO,
    EXIT_OK,
    ConfigError,
    ConfigSyntaxError,
)


def write_config(tmp_path, document, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(document))
    return path


class TestParseConfig:
    def test_minimal_document_gets_defaults(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, {}))
        assert cfg.wavelength_m == pytest.approx(1300e-9)
        assert cfg.cluster.n1 == 4 and cfg.cluster.n2 == 4
        assert cfg.base_level == 2
        assert cfg.windows.short_lambda == 4.0
        assert cfg.windows.long_lambda == 150.0
        assert cfg.medium.k_x == 1.2 and cfg.medium.k_y == 1.5
        assert cfg.seed == 0

    def test_unknown_key_named_in_error(self, tmp_path):
        path = write_config(tmp_path, {"medium": {"foo": 1.0}})
        with pytest.raises(ConfigError, match="foo"):
            parse_config(path)

    def test_unknown_block_named_in_error(self, tmp_path):
        path = write_config(tmp_path, {"sprockets": {}})
        with pytest.raises(ConfigError, match="sprockets"):
            parse_config(path)

    def test_indefinite_medium_rejected(self, tmp_path):
        path = write_config(
            tmp_path, {"medium": {"k_x": 0.5, "k_y": 0.5, "g": 0.9}}
        )
        from qho.errors import DefinitenessError

        with pytest.raises(DefinitenessError):
            parse_config(path)

    def test_malformed_json_rejected(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigSyntaxError):
            parse_config(path)

    def test_explicit_levels_override_stagger(self, tmp_path):
        path = write_config(
            tmp_path,
            {"cluster": {"levels": [[[2, 2]], [[3, 3], [4, 4]]]}},
        )
        cfg = parse_config(path)
        assert cfg.cluster.n1 == 1 and cfg.cluster.n2 == 2
        assert cfg.cluster.receiver[1].eps_x == 4

    def test_preset_overrides_medium(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, {}), preset="fig2")
        assert cfg.medium.k_x == 3.5 and cfg.medium.k_y == 5.0 and cfg.medium.g == 0.5

    def test_file_overrides_preset(self, tmp_path):
        path = write_config(tmp_path, {"medium": {"g": 0.1}})
        cfg = parse_config(path, preset="fig2")
        assert cfg.medium.k_x == 3.5 and cfg.medium.g == 0.1

    def test_config_echo_round_trips_through_json(self):
        echo = config_echo(build_config(preset="fig1"))
        again = json.loads(json.dumps(echo))
        assert again["medium"]["k_x"] == 1.2
        assert again["cluster"]["levels"][0][0] == [3, 2]

    def test_seed_override_reaches_config(self):
        cfg = build_config(preset="fig1", seed=42)
        assert cfg.seed == 42
        from qho.config import config_echo

        assert config_echo(cfg)["seed"] == 42

    def test_window_ordering_invariant(self, tmp_path):
        path = write_config(
            tmp_path, {"windows": {"short_lambda": 200.0}}
        )
        from qho.errors import ParameterError

        with pytest.raises(ParameterError):
            parse_config(path)


class TestCliExitCodes:
    def test_missing_config_file_is_io_error(self, tmp_path, capsys):
        rc = main(["pipeline", "--config", str(tmp_path / "nope.json"),
                   "--out", str(tmp_path / "out")])
        assert rc == EXIT_IO

    def test_malformed_config_is_syntax_error(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{")
        rc = main(["pipeline", "--config", str(path), "--out", str(tmp_path / "out")])
        assert rc == EXIT_CONFIG_SYNTAX

    def test_invariant_violation_is_exit_3(self, tmp_path):
        path = write_config(
            tmp_path, {"medium": {"k_x": 1.0, "k_y": 1.0, "g": 2.0}}
        )
        rc = main(["pipeline", "--config", str(path), "--out", str(tmp_path / "out")])
        assert rc == EXIT_CONFIG_INVARIANT

    def test_unknown_key_is_exit_3(self, tmp_path):
        path = write_config(tmp_path, {"grid": {"zz_top": 1}})
        rc = main(["field", "--config", str(path), "--out", str(tmp_path / "out")])
        assert rc == EXIT_CONFIG_INVARIANT

    def test_selftest_passes(self, capsys):
        rc = main(["selftest"])
        out = capsys.readouterr().out
        assert rc == EXIT_OK
        assert out.count("PASS") >= 6
        assert "FAIL" not in out


class TestCliSubcommands:
    def _fast_config(self, tmp_path, **extra):
        document = {
            "grid": {
                "z_span": 400.0,
                "transverse_points": 21,
                "span": 4.0,
                "diagnostic_slices": 8,
            }
        }
        for block, entries in extra.items():
            document.setdefault(block, {}).update(entries)
        return write_config(tmp_path, document)

    def test_field_subcommand_writes_grids(self, tmp_path):
        out = tmp_path / "out"
        rc = main(["field", "--config", str(self._fast_config(tmp_path)),
                   "--out", str(out)])
        assert rc == EXIT_OK
        assert (out / "field_grid.csv").exists()
        assert (out / "probe_line.csv").exists()
        assert (out / "hamiltonian.json").exists()

    def test_noise_subcommand(self, tmp_path):
        out = tmp_path / "out"
        rc = main(["noise", "--out", str(out)])
        assert rc == EXIT_OK
        report = json.loads((out / "noise.json").read_text())
        assert report["psd"] > 0
        lines = (out / "noise_density.csv").read_text().splitlines()
        assert lines[0] == "x,pdf"

    def test_capacity_subcommand_isolated_from_field(self, tmp_path, monkeypatch):
        # capacity must never touch field computation, even with a density
        import qho.pipeline as pipeline_mod
        import qho.field as field_mod

        def boom(*args, **kwargs):
            raise AssertionError("field computation invoked")

        monkeypatch.setattr(field_mod, "propagate_cluster", boom)
        monkeypatch.setattr(pipeline_mod, "propagate_cluster", boom)

        density = tmp_path / "density.csv"
        density.write_text(
            "bin_left,bin_right,probability\n0.9,1.0,0.5\n1.0,1.1,0.5\n"
        )
        out = tmp_path / "out"
        rc = main(["capacity", "--density", str(density), "--out", str(out),
                   "--sweep"])
        assert rc == EXIT_OK
        report = json.loads((out / "capacity.json").read_text())
        assert report["fading_bits_per_s"] > 0
        sweep = (out / "capacity_sweep.csv").read_text().splitlines()
        assert sweep[0] == "param,value,C_shannon,C_F,C_H,C_E,C_cqc"
        assert len(sweep) == 26

    def test_envelope_subcommand(self, tmp_path):
        out = tmp_path / "out"
        rc = main(["envelope", "--config", str(self._fast_config(tmp_path)),
                   "--out", str(out)])
        assert rc == EXIT_OK
        header = (out / "envelope.csv").read_text().splitlines()[0]
        assert header == "z,e_r,e_rs,e_rl"
        assert (out / "density_envelope.csv").exists()
        sidecar = json.loads((out / "envelope.json").read_text())
        assert sidecar["windows"]["short_lambda"] == 4.0
        assert sidecar["mean_energy"] > 0

    def test_negative_level_in_config_is_exit_3(self, tmp_path):
        path = write_config(
            tmp_path, {"cluster": {"levels": [[[2, -1]], [[2, 2]]]}}
        )
        rc = main(["field", "--config", str(path), "--out", str(tmp_path / "out")])
        assert rc == EXIT_CONFIG_INVARIANT

    def test_emit_flag_restricts_families(self, tmp_path):
        out = tmp_path / "out"
        rc = main(["pipeline", "--config", str(self._fast_config(tmp_path)),
                   "--out", str(out), "--emit", "csv"])
        assert rc == EXIT_OK
        names = {p.name for p in out.iterdir()}
        assert not any(name.endswith(".svg") for name in names)
        assert "envelope.csv" in names
        assert "manifest.json" in names  # the manifest is always written
