import numpy as np
import pytest

from qho.envelope import (
    EmpiricalDensity,
    EnvelopeSeries,
    decompose_envelope,
    envelope_density,
    estimate_density,
    moving_average,
    read_density_csv,
    received_energy,
    window_samples,
)
from qho.errors import (
    DegenerateEnvelopeError,
    EmptyProductError,
    NormalizationError,
    ParameterError,
    ProbeError,
    WindowError,
)
from qho.field import FieldGrid


def make_grid(values, x=None, y=None, z=None):
    nx, ny, nz = values.shape
    return FieldGrid(
        x=np.linspace(-1.0, 1.0, nx) if x is None else x,
        y=np.linspace(-1.0, 1.0, ny) if y is None else y,
        z=np.linspace(0.0, 1.0, nz) if z is None else z,
        values=values,
    )


class TestReceivedEnergy:
    def test_unit_field_gives_half(self):
        grid = make_grid(np.ones((5, 5, 8), dtype=complex))
        series = received_energy(grid, (0.0, 0.0))
        np.testing.assert_allclose(series.values, 0.5)

    def test_pure_phase_field_is_constant(self):
        z = np.linspace(0.0, 1.0, 16)
        values = np.exp(1j * 7.0 * z)[None, None, :] * np.ones((3, 3, 16))
        grid = make_grid(values, z=z)
        series = received_energy(grid, (0.3, -0.2))
        np.testing.assert_allclose(series.values, 0.5, rtol=1e-14)

    def test_two_component_energy_adds(self):
        base = make_grid(np.full((3, 3, 4), 2.0 + 0.0j))
        longitudinal = make_grid(np.full((3, 3, 4), 0.0 + 1.0j))
        series = received_energy(base, (0.0, 0.0), z_field=longitudinal)
        np.testing.assert_allclose(series.values, 0.5 * (4.0 + 1.0))

    def test_probe_outside_grid_rejected(self):
        grid = make_grid(np.ones((5, 5, 4), dtype=complex))
        with pytest.raises(ProbeError):
            received_energy(grid, (5.0, 0.0))

    def test_probe_within_one_cell_is_accepted(self):
        grid = make_grid(np.ones((5, 5, 4), dtype=complex))
        series = received_energy(grid, (1.3, 0.0))  # half a cell beyond the edge
        assert series.values.shape == (4,)


class TestMovingAverage:
    def test_constant_series_unchanged(self):
        values = np.full(64, 0.731)
        out = moving_average(values, 8)
        assert np.array_equal(out, values)

    def test_impulse_plateau(self):
        values = np.zeros(21)
        values[10] = 1.0
        out = moving_average(values, 5)
        np.testing.assert_allclose(out[8:13], 0.2, rtol=1e-15)
        assert out[5] == 0.0

    def test_alternating_signs_cancel_in_interior(self):
        values = np.tile([1.0, -1.0], 32)
        out = moving_average(values, 6)
        np.testing.assert_allclose(out[3:-3], 0.0, atol=1e-15)

    def test_matches_direct_summation_oracle(self):
        rng = np.random.default_rng(7)
        values = rng.uniform(0.1, 3.0, 97)
        for window in (1, 2, 5, 8, 31):
            out = moving_average(values, window)
            lo_half = (window - 1) // 2
            hi_half = window // 2
            for i in range(values.size):
                lo = max(0, i - lo_half)
                hi = min(values.size - 1, i + hi_half)
                assert out[i] == pytest.approx(
                    values[lo : hi + 1].mean(), rel=1e-12
                ), f"window {window} index {i}"

    def test_output_stays_in_input_range(self):
        rng = np.random.default_rng(11)
        values = rng.normal(0.0, 2.0, 257)
        out = moving_average(values, 16)
        assert out.min() >= values.min() and out.max() <= values.max()

    def test_window_validation(self):
        with pytest.raises(WindowError):
            moving_average(np.ones(4), 5)
        with pytest.raises(WindowError):
            moving_average(np.ones(4), 0)

    def test_series_input_takes_wavelength_window(self):
        z = np.arange(600) * 0.125
        series = EnvelopeSeries(z=z, values=np.cos(z) ** 2, lam=1.0)
        filtered = moving_average(series, 4.0)  # 4 wavelengths = 32 samples
        np.testing.assert_array_equal(filtered, moving_average(series.values, 32))


class TestWindowSamples:
    def test_eighth_wavelength_sampling_gives_32(self):
        assert window_samples(4.0, 1.0, 0.125) == 32

    def test_round_half_to_even(self):
        # 4.0625 wavelengths at lambda/8 spacing is 32.5 samples -> 32
        assert window_samples(4.0625, 1.0, 0.125) == 32
        assert window_samples(4.1875, 1.0, 0.125) == 34  # 33.5 -> 34

    def test_below_one_sample_rejected(self):
        with pytest.raises(WindowError):
            window_samples(0.01, 1.0, 0.125)


class TestDecomposeEnvelope:
    def _series(self, values, hz=0.125):
        z = np.arange(values.size) * hz
        return EnvelopeSeries(z=z, values=values, lam=1.0)

    def test_constant_series(self):
        c = 2.89
        series = self._series(np.full(2048, c))
        out = decompose_envelope(series)
        np.testing.assert_allclose(out.small_scale, np.sqrt(c), rtol=1e-15)
        np.testing.assert_allclose(out.large_scale, 1.0, rtol=1e-15)

    def test_homogeneity_power_of_two_scale(self):
        rng = np.random.default_rng(3)
        z = np.arange(2400) * 0.125
        base = 1.0 + 0.4 * np.sin(2 * np.pi * z / 55.0) + 0.05 * rng.random(2400)
        series = self._series(base)
        scaled = self._series(4.0 * base)
        a = decompose_envelope(series)
        b = decompose_envelope(scaled)
        assert np.max(np.abs(b.small_scale - 2.0 * a.small_scale)) <= 1e-12 * np.max(
            np.abs(a.small_scale)
        )
        assert np.max(np.abs(b.large_scale - a.large_scale)) <= 1e-12

    def test_ratio_mode_scales_differently(self):
        z = np.arange(2048) * 0.125
        base = 1.5 + 0.3 * np.cos(2 * np.pi * z / 40.0)
        series = self._series(base)
        printed = decompose_envelope(series, small_scale_mode="sqrt")
        mean_one = decompose_envelope(series, small_scale_mode="ratio")
        assert np.mean(mean_one.small_scale) == pytest.approx(1.0, abs=0.01)
        assert not np.allclose(printed.small_scale, mean_one.small_scale)

    def test_dark_probe_rejected(self):
        series = self._series(np.zeros(2048))
        with pytest.raises(DegenerateEnvelopeError):
            decompose_envelope(series)

    def test_series_shorter_than_long_window_rejected(self):
        series = self._series(np.ones(512))  # long window needs 1200 samples
        with pytest.raises(WindowError):
            decompose_envelope(series)

    def test_window_ordering_enforced(self):
        series = self._series(np.ones(4096))
        with pytest.raises(ParameterError):
            decompose_envelope(series, short_window=150.0, long_window=4.0)


class TestEstimateDensity:
    def test_point_mass(self):
        density = estimate_density(np.full(1000, 3.3))
        assert density.probabilities.max() == 1.0
        assert density.probabilities.sum() == pytest.approx(1.0, abs=1e-12)

    def test_uniform_samples_within_binomial_fluctuation(self):
        rng = np.random.default_rng(19)
        n = 20000
        samples = rng.uniform(0.0, 1.0, n)
        density = estimate_density(samples, bins=10)
        p = 0.1
        sigma = np.sqrt(p * (1 - p) / n)
        np.testing.assert_allclose(density.probabilities, p, atol=3.5 * sigma)

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(23)
        density = estimate_density(rng.normal(0.0, 1.0, 5000))
        assert abs(density.probabilities.sum() - 1.0) < 1e-12

    def test_freedman_diaconis_default_bin_count(self):
        rng = np.random.default_rng(5)
        samples = rng.normal(0.0, 1.0, 8000)
        density = estimate_density(samples)
        iqr = np.subtract(*np.percentile(samples, [75, 25]))
        width = 2 * iqr / 8000 ** (1 / 3)
        expected = int(np.ceil((samples.max() - samples.min()) / width))
        assert density.probabilities.size == expected

    def test_degenerate_iqr_falls_back_to_32_bins(self):
        samples = np.zeros(1000)
        samples[:3] = 5.0  # IQR stays zero, range does not
        density = estimate_density(samples)
        assert density.probabilities.size == 32

    def test_too_few_samples_rejected(self):
        with pytest.raises(ParameterError):
            estimate_density(np.ones(99))

    def test_explicit_edges_override(self):
        rng = np.random.default_rng(13)
        samples = rng.uniform(0.0, 1.0, 1000)
        edges = np.array([0.0, 0.25, 0.75, 1.0])
        density = estimate_density(samples, bins=edges)
        np.testing.assert_array_equal(density.edges, edges)
        assert density.probabilities.sum() == pytest.approx(1.0, abs=1e-12)


class TestEnvelopeDensity:
    def _uniform(self, lo, hi, bins=10):
        edges = np.linspace(lo, hi, bins + 1)
        return EmpiricalDensity(edges=edges, probabilities=np.full(bins, 1.0 / bins))

    def test_uniform_times_uniform_is_uniform(self):
        out = envelope_density(self._uniform(0, 1), self._uniform(0, 1))
        np.testing.assert_allclose(out.probabilities, 0.1, rtol=1e-12)
        assert out.probabilities.sum() == pytest.approx(1.0, abs=1e-12)

    def test_point_mass_collapses_product(self):
        # atom placed inside one shared bin so rebinning cannot split it
        point = EmpiricalDensity(
            edges=np.array([0.449, 0.451]), probabilities=np.array([1.0])
        )
        out = envelope_density(point, self._uniform(0, 1))
        peak = np.argmax(out.probabilities)
        assert out.probabilities[peak] == pytest.approx(1.0, abs=1e-12)
        assert 0.4 < out.midpoints[peak] < 0.5

    def test_disjoint_supports_rejected(self):
        with pytest.raises(EmptyProductError):
            envelope_density(self._uniform(0, 1, 64), self._uniform(10, 11, 64))

    def test_unnormalized_inputs_rejected(self):
        bad = EmpiricalDensity(
            edges=np.linspace(0, 1, 11),
            probabilities=np.full(10, 0.05),
            normalized=False,
        )
        with pytest.raises(NormalizationError):
            envelope_density(bad, self._uniform(0, 1))

    def test_product_mode_matches_monte_carlo(self):
        rng = np.random.default_rng(31)
        a = estimate_density(rng.uniform(1.0, 2.0, 40000), bins=40)
        b = estimate_density(rng.uniform(0.5, 1.5, 40000), bins=40)
        out = envelope_density(a, b, mode="product")
        draws = rng.uniform(1.0, 2.0, 200000) * rng.uniform(0.5, 1.5, 200000)
        assert out.mean() == pytest.approx(draws.mean(), rel=0.02)
        assert out.probabilities.sum() == pytest.approx(1.0, abs=1e-9)

    def test_unknown_mode_rejected(self):
        with pytest.raises(ParameterError):
            envelope_density(self._uniform(0, 1), self._uniform(0, 1), mode="x")


class TestSerialization:
    def test_envelope_csv_columns(self, tmp_path):
        z = np.arange(1300) * 0.125
        values = 1.0 + 0.1 * np.sin(z)
        series = EnvelopeSeries(z=z, values=values, lam=1.0)
        out = decompose_envelope(series)
        path = tmp_path / "envelope.csv"
        series.write_csv(path, small_scale=out.small_scale, large_scale=out.large_scale)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "z,e_r,e_rs,e_rl"
        assert len(lines) == 1301

        bare = tmp_path / "bare.csv"
        series.write_csv(bare)
        assert bare.read_text().splitlines()[0] == "z,e_r"

    def test_density_csv_round_trip(self, tmp_path):
        rng = np.random.default_rng(41)
        density = estimate_density(rng.normal(0, 1, 2000))
        path = tmp_path / "density.csv"
        density.write_csv(path)
        back = read_density_csv(path)
        np.testing.assert_allclose(back.edges, density.edges, rtol=0, atol=0)
        np.testing.assert_allclose(
            back.probabilities, density.probabilities, rtol=0, atol=0
        )
        header = path.read_text().splitlines()[0]
        assert header == "bin_left,bin_right,probability"
