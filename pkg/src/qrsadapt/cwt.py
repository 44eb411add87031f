"""Continuous wavelet transform over a scale grid, by direct convolution.

Scales are the physical duration in seconds spanned by the wavelet's
[0, 1] support; the translation parameter b is the support's left edge,
indexed by sample. Coefficients carry the 1/fs quadrature factor so they
approximate the continuous transform integral independent of sampling
rate.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .design import AdaptedWavelet
from .errors import ConfigInvalid, NonFiniteInput, ScaleTooSmall, SignalTooShort

MIN_KERNEL_SAMPLES = 4

DEFAULT_SCALE_MIN_S = 0.04
DEFAULT_SCALE_MAX_S = 0.25
DEFAULT_SCALE_COUNT = 16


@dataclass(frozen=True)
class EcgSignal:
    """A sampled single-channel ECG record (amplitudes in millivolts)."""

    samples: np.ndarray
    fs: float
    record_id: str = ""

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64).copy()
        if samples.ndim != 1 or samples.size < 2:
            raise SignalTooShort(f"signal needs >= 2 samples, got {samples.size}")
        if not np.all(np.isfinite(samples)):
            raise NonFiniteInput("signal contains non-finite samples")
        if not (self.fs > 0):
            raise ConfigInvalid(f"sampling rate must be > 0, got {self.fs}")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.fs


@dataclass(frozen=True)
class ScaleGrid:
    """Strictly increasing positive scales, in seconds of wavelet support."""

    scales: np.ndarray

    def __post_init__(self):
        scales = np.asarray(self.scales, dtype=np.float64).copy()
        if scales.ndim != 1 or scales.size == 0:
            raise ConfigInvalid("scale grid must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(scales)) or np.any(scales <= 0):
            raise ConfigInvalid("scales must be finite and > 0")
        if np.any(np.diff(scales) <= 0):
            raise ConfigInvalid("scales must be strictly increasing")
        scales.flags.writeable = False
        object.__setattr__(self, "scales", scales)

    def __len__(self) -> int:
        return self.scales.size


def default_scale_grid() -> ScaleGrid:
    """16 log-spaced scales spanning the physiological QRS duration range."""
    return ScaleGrid(np.geomspace(DEFAULT_SCALE_MIN_S, DEFAULT_SCALE_MAX_S, DEFAULT_SCALE_COUNT))


@dataclass(frozen=True)
class CwtMatrix:
    """|scales| x |signal| coefficient grid W(a, b) with b = column / fs."""

    coeffs: np.ndarray
    scales: ScaleGrid
    fs: float


@dataclass(frozen=True)
class CoefficientPeak:
    """A local maximum of |W| along b at one scale."""

    sample_b: int
    scale: float
    value: float
    magnitude: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "magnitude", abs(self.value))


def kernel_length(scale: float, fs: float) -> int:
    """Number of samples spanned by the wavelet support at this scale."""
    return int(round(scale * fs))


def sample_wavelet_at_scale(w: AdaptedWavelet, scale: float, fs: float) -> np.ndarray:
    """Resample the stored waveform onto the L = round(scale*fs) node grid."""
    length = kernel_length(scale, fs)
    if length < MIN_KERNEL_SAMPLES:
        raise ScaleTooSmall(
            f"scale {scale} at fs={fs} gives a {length}-sample kernel "
            f"(minimum {MIN_KERNEL_SAMPLES})"
        )
    nodes = np.linspace(0.0, 1.0, length)
    stored = np.linspace(0.0, 1.0, w.resolution)
    return np.interp(nodes, stored, w.sampled)


def _cwt_row(x: np.ndarray, kernel: np.ndarray, scale: float, fs: float) -> np.ndarray:
    # W[n] = (1/sqrt(a)) * sum_j x[n+j] * k[j] / fs, with x zero outside
    # its support. Padding the tail makes 'valid' produce exactly one
    # output per signal sample.
    padded = np.concatenate([x, np.zeros(kernel.size - 1)])
    return np.correlate(padded, kernel, mode="valid") / (np.sqrt(scale) * fs)


def cwt(x: EcgSignal, w: AdaptedWavelet, grid: ScaleGrid, threads: int = 1) -> CwtMatrix:
    """Evaluate the transform on every scale of the grid.

    Rows are independent, so they may be computed concurrently; the
    result is bit-identical for any thread count.
    """
    kernels = [sample_wavelet_at_scale(w, a, x.fs) for a in grid.scales]
    out = np.empty((len(grid), len(x)))

    def fill(i: int) -> None:
        out[i] = _cwt_row(x.samples, kernels[i], grid.scales[i], x.fs)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, range(len(grid))))
    else:
        for i in range(len(grid)):
            fill(i)
    return CwtMatrix(coeffs=out, scales=grid, fs=x.fs)


def find_coefficient_maxima(m: CwtMatrix, threshold: float) -> list[CoefficientPeak]:
    """Strict local maxima of |W| along b, at or above the threshold.

    Magnitude is used rather than signed value so inverted complexes
    produce peaks too. Boundary columns are never reported (a strict
    maximum needs both neighbors). Sorted by sample then scale.
    """
    if threshold < 0:
        raise ConfigInvalid(f"threshold must be >= 0, got {threshold}")
    mag = np.abs(m.coeffs)
    peaks = []
    for i, scale in enumerate(m.scales.scales):
        row = mag[i]
        interior = (row[1:-1] > row[:-2]) & (row[1:-1] > row[2:]) & (row[1:-1] >= threshold)
        for b in np.nonzero(interior)[0] + 1:
            peaks.append(CoefficientPeak(sample_b=int(b), scale=float(scale),
                                         value=float(m.coeffs[i, b])))
    peaks.sort(key=lambda p: (p.sample_b, p.scale))
    return peaks


def write_matrix_csv(m: CwtMatrix, path) -> None:
    """Dump the matrix as CSV, one row per scale."""
    from .io import atomic_write

    scale_list = ",".join("{:.17g}".format(a) for a in m.scales.scales)
    lines = [f"# scales={scale_list} fs={m.fs:.17g}"]
    for row in m.coeffs:
        lines.append(",".join("{:.17g}".format(v) for v in row))
    atomic_write(path, "\n".join(lines) + "\n")
