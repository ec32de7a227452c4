"""Received-energy series, two-window envelope decomposition, densities.

The received energy at a probe point is e_r(z) = |E|^2 / 2. A short
moving-average window (default 4 wavelengths) extracts the trend psi used
to normalize the small-scale component e_r / sqrt(psi); a long window
(default 150 wavelengths) applied to psi gives the large-scale component
psi / psi_long. Windows are specified in wavelengths and converted to
sample counts with banker's rounding, so at 8 samples per wavelength the
4-wavelength window is exactly 32 samples.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateEnvelopeError,
    EmptyProductError,
    NormalizationError,
    ParameterError,
    ProbeError,
    WindowError,
)
from .field import FieldGrid, _uniform_spacing

ENVELOPE_FLOOR = 1e-30
_DEGENERATE_BINS = 32


@dataclass
class EnvelopeSeries:
    """Nonnegative energy samples along the propagation axis."""

    z: np.ndarray
    values: np.ndarray
    lam: float = 1.0

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.z.shape != self.values.shape or self.z.ndim != 1:
            raise ParameterError("z and values must be 1-D arrays of equal length")
        if not (self.lam > 0):
            raise ParameterError(f"reference wavelength must be positive, got {self.lam}")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ParameterError("energy samples must be finite and nonnegative")
        _uniform_spacing(self.z, "z")

    @property
    def hz(self) -> float:
        return _uniform_spacing(self.z, "z")

    def write_csv(self, path, small_scale=None, large_scale=None):
        """``z,e_r`` rows, optionally extended with ``e_rs,e_rl`` columns."""
        extra = small_scale is not None and large_scale is not None
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["z", "e_r", "e_rs", "e_rl"] if extra else ["z", "e_r"])
            for i in range(self.z.size):
                row = [repr(float(self.z[i])), repr(float(self.values[i]))]
                if extra:
                    row += [repr(float(small_scale[i])), repr(float(large_scale[i]))]
                writer.writerow(row)


def received_energy(field: FieldGrid, probe, *, lam=1.0, z_field: FieldGrid | None = None) -> EnvelopeSeries:
    """Energy series at the grid node nearest to the probe point.

    ``e_r(z) = |E(x*, y*, z)|^2 / 2``; when the longitudinal component grid
    is supplied too, the component energies add:
    ``e_r = (|E_x|^2 + |E_z|^2) / 2``. The probe must lie on the grid or
    within one cell of its edge.
    """
    px, py = float(probe[0]), float(probe[1])

    def nearest(axis, value, name):
        h = _uniform_spacing(axis, name)
        if value < axis[0] - h or value > axis[-1] + h:
            raise ProbeError(
                f"probe {name} = {value:g} outside grid [{axis[0]:g}, {axis[-1]:g}]"
            )
        return int(np.argmin(np.abs(axis - value)))

    ix = nearest(field.x, px, "x")
    iy = nearest(field.y, py, "y")
    energy = 0.5 * np.abs(field.values[ix, iy, :]) ** 2
    if z_field is not None:
        if z_field.values.shape != field.values.shape:
            raise ParameterError("component grids must share the same shape")
        energy = energy + 0.5 * np.abs(z_field.values[ix, iy, :]) ** 2
    return EnvelopeSeries(z=field.z.copy(), values=energy, lam=lam)


def window_samples(window_lambda: float, lam: float, hz: float) -> int:
    """Convert a window length in wavelengths to a sample count.

    Uses round-half-to-even, and requires the result to be >= 1 sample.
    """
    if not (window_lambda > 0 and lam > 0 and hz > 0):
        raise ParameterError("window length, wavelength and spacing must be positive")
    samples = round(window_lambda * lam / hz)
    if samples < 1:
        raise WindowError(
            f"window of {window_lambda:g} wavelengths is below one sample at "
            f"spacing {hz:g}"
        )
    return samples


def moving_average(values, window) -> np.ndarray:
    """Centered moving average with shrinking windows at the edges.

    For a plain array ``window`` is a sample count; for an
    :class:`EnvelopeSeries` it is a length in wavelengths, converted with
    :func:`window_samples`. The interior window covers exactly the requested
    number of samples (for even lengths it extends one sample further
    forward); near the edges the window is truncated to the available
    samples, so constant inputs are reproduced exactly everywhere. Output
    length equals input length.
    """
    if isinstance(values, EnvelopeSeries):
        window = window_samples(window, values.lam, values.hz)
        values = values.values
    window = int(window)
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise ParameterError("moving_average expects a 1-D array")
    if window < 1:
        raise WindowError(f"window must be >= 1 sample, got {window}")
    n = values.size
    if n < window:
        raise WindowError(f"series of length {n} is shorter than window {window}")
    lo_half = (window - 1) // 2
    hi_half = window // 2
    idx = np.arange(n)
    lo = np.maximum(idx - lo_half, 0)
    hi = np.minimum(idx + hi_half, n - 1)
    # cumulative sums of the offset series keep constants exact
    base = values[0]
    csum = np.concatenate([[0.0], np.cumsum(values - base)])
    out = base + (csum[hi + 1] - csum[lo]) / (hi - lo + 1)
    # guard round-off: a mean can never leave the sample range
    return np.clip(out, values.min(), values.max())


@dataclass(frozen=True)
class EnvelopeDecomposition:
    """Small-/large-scale envelope components plus the intermediate trends."""

    small_scale: np.ndarray
    large_scale: np.ndarray
    trend: np.ndarray
    trend_long: np.ndarray


def decompose_envelope(series: EnvelopeSeries, short_window: float = 4.0,
                       long_window: float = 150.0,
                       small_scale_mode: str = "sqrt") -> EnvelopeDecomposition:
    """Two-window decomposition of the energy series.

    psi = MA_short(e_r); the small-scale component is e_r / sqrt(psi)
    (mode "sqrt", the default) or e_r / psi (mode "ratio", a mean-one
    alternative for sensitivity checks, never used implicitly);
    psi_long = MA_long(psi) and the large-scale component is psi / psi_long.
    """
    if small_scale_mode not in ("sqrt", "ratio"):
        raise ParameterError(f"unknown small-scale mode {small_scale_mode!r}")
    if not (short_window < long_window):
        raise ParameterError("short window must be shorter than the long window")
    w_short = window_samples(short_window, series.lam, series.hz)
    w_long = window_samples(long_window, series.lam, series.hz)
    trend = moving_average(series.values, w_short)
    if trend.min() <= ENVELOPE_FLOOR:
        raise DegenerateEnvelopeError(
            f"short-window trend reaches {trend.min():.3e}; probe point is dark"
        )
    trend_long = moving_average(trend, w_long)
    if trend_long.min() <= ENVELOPE_FLOOR:
        raise DegenerateEnvelopeError(
            f"long-window trend reaches {trend_long.min():.3e}; probe point is dark"
        )
    if small_scale_mode == "sqrt":
        small = series.values / np.sqrt(trend)
    else:
        small = series.values / trend
    large = trend / trend_long
    return EnvelopeDecomposition(
        small_scale=small, large_scale=large, trend=trend, trend_long=trend_long
    )


@dataclass
class EmpiricalDensity:
    """Normalized histogram: strictly increasing bin edges plus probabilities."""

    edges: np.ndarray
    probabilities: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=float)
        self.probabilities = np.asarray(self.probabilities, dtype=float)
        if self.edges.ndim != 1 or self.edges.size != self.probabilities.size + 1:
            raise ParameterError("need len(edges) == len(probabilities) + 1")
        if not np.all(np.isfinite(self.edges)) or not np.all(np.diff(self.edges) > 0):
            raise ParameterError("edges must be finite and strictly increasing")
        if np.any(self.probabilities < 0):
            raise ParameterError("probabilities must be nonnegative")
        if self.normalized and abs(self.probabilities.sum() - 1.0) > 1e-9:
            raise NormalizationError(
                f"probabilities sum to {self.probabilities.sum()!r}, expected 1"
            )

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def mean(self) -> float:
        return float(np.sum(self.midpoints * self.probabilities))

    def second_moment(self) -> float:
        return float(np.sum(self.midpoints ** 2 * self.probabilities))

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["bin_left", "bin_right", "probability"])
            for i in range(self.probabilities.size):
                writer.writerow(
                    [repr(float(self.edges[i])), repr(float(self.edges[i + 1])),
                     repr(float(self.probabilities[i]))]
                )


def read_density_csv(path) -> EmpiricalDensity:
    lefts, rights, probs = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["bin_left", "bin_right", "probability"]:
            raise ParameterError(f"unexpected density CSV header {header}")
        for row in reader:
            lefts.append(float(row[0]))
            rights.append(float(row[1]))
            probs.append(float(row[2]))
    edges = np.concatenate([lefts, rights[-1:]])
    return EmpiricalDensity(edges=edges, probabilities=np.asarray(probs))


def estimate_density(samples, bins=None) -> EmpiricalDensity:
    """Normalized histogram of at least 100 finite samples.

    The default bin count follows the Freedman-Diaconis rule; a zero
    interquartile range falls back to 32 uniform bins over [min, max+eps].
    ``bins`` may be an integer count or an explicit edge array.
    """
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size < 100:
        raise ParameterError(f"need at least 100 samples, got {samples.size}")
    if not np.all(np.isfinite(samples)):
        raise ParameterError("samples must be finite")
    lo, hi = float(samples.min()), float(samples.max())
    if bins is None:
        q75, q25 = np.percentile(samples, [75.0, 25.0])
        iqr = q75 - q25
        if iqr <= 0.0 or hi <= lo:
            eps = max(1e-12, abs(hi) * 1e-9)
            edges = np.linspace(lo, hi + eps, _DEGENERATE_BINS + 1)
        else:
            width = 2.0 * iqr / samples.size ** (1.0 / 3.0)
            count = int(np.clip(math.ceil((hi - lo) / width), 1, 512))
            edges = np.linspace(lo, hi, count + 1)
    elif np.ndim(bins) == 0:
        if int(bins) < 1:
            raise ParameterError("bin count must be >= 1")
        edges = np.linspace(lo, hi if hi > lo else lo + max(1e-12, abs(hi) * 1e-9),
                            int(bins) + 1)
    else:
        edges = np.asarray(bins, dtype=float)
    counts, edges = np.histogram(samples, bins=edges)
    probs = counts.astype(float)
    total = probs.sum()
    if total == 0.0:
        raise ParameterError("no samples fell inside the provided bins")
    probs /= total
    return EmpiricalDensity(edges=edges, probabilities=probs)


def _rebin(density: EmpiricalDensity, edges: np.ndarray) -> np.ndarray:
    """Mass-conserving redistribution of bin probabilities onto new edges."""
    out = np.zeros(edges.size - 1)
    for i in range(density.probabilities.size):
        left, right = density.edges[i], density.edges[i + 1]
        mass = density.probabilities[i]
        if mass == 0.0:
            continue
        width = right - left
        lo_idx = np.searchsorted(edges, left, side="right") - 1
        hi_idx = np.searchsorted(edges, right, side="left")
        for j in range(max(lo_idx, 0), min(hi_idx, out.size)):
            overlap = min(right, edges[j + 1]) - max(left, edges[j])
            if overlap > 0:
                out[j] += mass * overlap / width
    return out


def envelope_density(small: EmpiricalDensity, large: EmpiricalDensity,
                     mode: str = "pointwise") -> EmpiricalDensity:
    """Combine the two component densities into the envelope density.

    The default mode resamples both histograms onto a shared grid (union of
    supports, the larger bin count), multiplies bin probabilities pointwise
    and renormalizes. Mode "product" instead builds the density of the
    product of two independent variables (numerical Mellin-type
    convolution); it is an explicitly requested alternative, never a silent
    substitute.
    """
    for d in (small, large):
        if not d.normalized or abs(d.probabilities.sum() - 1.0) > 1e-9:
            raise NormalizationError("component densities must be normalized")
    if mode == "pointwise":
        lo = min(small.edges[0], large.edges[0])
        hi = max(small.edges[-1], large.edges[-1])
        count = max(small.probabilities.size, large.probabilities.size)
        edges = np.linspace(lo, hi, count + 1)
        combined = _rebin(small, edges) * _rebin(large, edges)
        total = combined.sum()
        if total <= 0.0:
            raise EmptyProductError("component densities have disjoint supports")
        return EmpiricalDensity(edges=edges, probabilities=combined / total)
    if mode == "product":
        if small.edges[0] < 0 or large.edges[0] < 0:
            raise ParameterError("product mode needs nonnegative supports")
        prods = np.multiply.outer(small.edges, large.edges)
        lo, hi = float(prods.min()), float(prods.max())
        if hi <= lo:
            hi = lo + max(1e-12, abs(lo) * 1e-9)
        count = max(small.probabilities.size, large.probabilities.size)
        edges = np.linspace(lo, hi, count + 1)
        out = np.zeros(count)
        for i in range(small.probabilities.size):
            p = small.probabilities[i]
            if p == 0.0:
                continue
            for j in range(large.probabilities.size):
                q = large.probabilities[j]
                if q == 0.0:
                    continue
                a = small.edges[i] * large.edges[j]
                b = small.edges[i + 1] * large.edges[j + 1]
                if b <= a:
                    a, b = b, a
                if b == a:
                    b = a + max(1e-12, abs(a) * 1e-9)
                lo_idx = max(np.searchsorted(edges, a, side="right") - 1, 0)
                hi_idx = min(np.searchsorted(edges, b, side="left"), count)
                for k in range(lo_idx, hi_idx):
                    overlap = min(b, edges[k + 1]) - max(a, edges[k])
                    if overlap > 0:
                        out[k] += p * q * overlap / (b - a)
        total = out.sum()
        if total <= 0.0:
            raise EmptyProductError("product density has no mass")
        return EmpiricalDensity(edges=edges, probabilities=out / total)
    raise ParameterError(f"unknown density combination mode {mode!r}")
