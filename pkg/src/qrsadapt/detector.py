"""Two-phase R-peak detection.

Phase 1 runs the transform over a short initial window with every
wavelet in the bank and keeps the one producing the largest coefficient
magnitude. Phase 2 transforms the whole record with the winner, takes
per-segment relative thresholds, collapses candidates across scales, and
enforces an absolute refractory period so repolarization waves cannot be
reported as beats.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cwt import (
    CwtMatrix,
    EcgSignal,
    ScaleGrid,
    cwt,
    default_scale_grid,
    find_coefficient_maxima,
    kernel_length,
)
from .design import AdaptedWavelet
from .errors import ConfigInvalid, EmptyBank, SignalTooShort

DEFAULT_SELECTION_WINDOW = 250     # samples, roughly one cycle
DEFAULT_REFRACTORY_S = 0.192
DEFAULT_THRESHOLD_FRACTION = 0.4
DEFAULT_SEGMENT_S = 2.5


@dataclass(frozen=True)
class DetectionConfig:
    """Tunables for both phases; defaults follow the package conventions."""

    selection_window: int = DEFAULT_SELECTION_WINDOW
    refractory: float = DEFAULT_REFRACTORY_S
    threshold_fraction: float = DEFAULT_THRESHOLD_FRACTION
    segment_length: float = DEFAULT_SEGMENT_S
    scale_grid: ScaleGrid = field(default_factory=default_scale_grid)

    def __post_init__(self):
        if not (0.0 < self.threshold_fraction < 1.0):
            raise ConfigInvalid(f"threshold_fraction must be in (0, 1), got {self.threshold_fraction}")
        if not (self.refractory > 0):
            raise ConfigInvalid(f"refractory must be > 0, got {self.refractory}")
        if not (self.segment_length > 0):
            raise ConfigInvalid(f"segment_length must be > 0, got {self.segment_length}")
        if self.selection_window < 2:
            raise ConfigInvalid(f"selection_window must be >= 2, got {self.selection_window}")

    def refractory_samples(self, fs: float) -> int:
        return max(1, int(round(self.refractory * fs)))

    def max_kernel_length(self, fs: float) -> int:
        return kernel_length(float(self.scale_grid.scales[-1]), fs)


@dataclass(frozen=True)
class RPeak:
    """One detected beat: estimated R sample plus the evidence behind it."""

    sample: int
    time: float
    scale: float
    magnitude: float
    polarity: int


@dataclass(frozen=True)
class DetectionResult:
    peaks: tuple
    selected_index: int
    selected_name: str
    per_wavelet_max: tuple
    record_id: str = ""


def select_wavelet(
    x: EcgSignal,
    bank: list[AdaptedWavelet],
    cfg: DetectionConfig = DetectionConfig(),
    threads: int = 1,
):
    """Phase 1: pick the bank wavelet with the largest |W| on the lead-in.

    Returns (index, per_wavelet_max). Ties break to the lowest index.
    """
    if not bank:
        raise EmptyBank("wavelet bank is empty")
    if len(x) < cfg.selection_window:
        raise SignalTooShort(
            f"phase 1 needs {cfg.selection_window} samples, signal has {len(x)}"
        )
    if cfg.selection_window < cfg.max_kernel_length(x.fs):
        raise ConfigInvalid(
            f"selection_window {cfg.selection_window} shorter than the "
            f"largest kernel ({cfg.max_kernel_length(x.fs)} samples)"
        )
    window = EcgSignal(x.samples[: cfg.selection_window], fs=x.fs, record_id=x.record_id)
    maxima = np.empty(len(bank))
    for i, w in enumerate(bank):
        m = cwt(window, w, cfg.scale_grid, threads=threads)
        maxima[i] = np.max(np.abs(m.coeffs))
    return int(np.argmax(maxima)), maxima


def apply_refractory(candidates: list[RPeak], refractory_samples: int) -> list[RPeak]:
    """Greedy keep-by-magnitude with a minimum inter-peak spacing.

    A candidate is accepted iff its sample differs by at least
    refractory_samples from every already-accepted peak (the boundary is
    inclusive-keep). Output is sorted by sample.
    """
    if refractory_samples < 1:
        raise ConfigInvalid(f"refractory_samples must be >= 1, got {refractory_samples}")
    ranked = sorted(candidates, key=lambda p: (-p.magnitude, p.sample, p.scale))
    accepted: list[RPeak] = []
    taken: list[int] = []
    for cand in ranked:
        if all(abs(cand.sample - s) >= refractory_samples for s in taken):
            accepted.append(cand)
            taken.append(cand.sample)
    accepted.sort(key=lambda p: p.sample)
    return accepted


def _segment_thresholds(m: CwtMatrix, segment_samples: int, eta: float) -> np.ndarray:
    mag = np.abs(m.coeffs)
    n = mag.shape[1]
    bounds = list(range(0, n, segment_samples)) + [n]
    theta = np.empty(n)
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        theta[lo:hi] = eta * np.max(mag[:, lo:hi])
    return theta


def detect_r_peaks(
    x: EcgSignal,
    w: AdaptedWavelet,
    cfg: DetectionConfig = DetectionConfig(),
    threads: int = 1,
) -> list[RPeak]:
    """Phase 2: locate beats with one wavelet.

    Candidates are |W| local maxima that clear their segment's relative
    threshold and whose kernel support lies fully inside the signal. The
    R position aligns the wavelet's internal extremum with the signal:
    r = b + round(scale * t_peak * fs). A single greedy refractory pass
    both collapses co-located candidates across scales (largest
    magnitude wins) and enforces the minimum spacing.
    """
    fs = x.fs
    n = len(x)
    if n < cfg.max_kernel_length(fs):
        raise SignalTooShort(
            f"signal ({n} samples) shorter than the largest kernel "
            f"({cfg.max_kernel_length(fs)} samples)"
        )
    m = cwt(x, w, cfg.scale_grid, threads=threads)
    seg = max(1, int(round(cfg.segment_length * fs)))
    theta = _segment_thresholds(m, seg, cfg.threshold_fraction)

    lengths = {float(a): kernel_length(float(a), fs) for a in cfg.scale_grid.scales}
    candidates = []
    for peak in find_coefficient_maxima(m, threshold=0.0):
        if peak.magnitude < theta[peak.sample_b]:
            continue
        if peak.sample_b + lengths[peak.scale] > n:
            continue  # kernel support leaves the signal
        r = peak.sample_b + int(round(peak.scale * w.t_peak * fs))
        r = min(r, n - 1)
        candidates.append(
            RPeak(
                sample=r,
                time=r / fs,
                scale=peak.scale,
                magnitude=peak.magnitude,
                polarity=1 if peak.value >= 0 else -1,
            )
        )
    return apply_refractory(candidates, cfg.refractory_samples(fs))


def run_two_phase(
    x: EcgSignal,
    bank: list[AdaptedWavelet],
    cfg: DetectionConfig = DetectionConfig(),
    threads: int = 1,
) -> DetectionResult:
    """Select the best-matched wavelet, then detect beats with it."""
    index, maxima = select_wavelet(x, bank, cfg, threads=threads)
    peaks = detect_r_peaks(x, bank[index], cfg, threads=threads)
    return DetectionResult(
        peaks=tuple(peaks),
        selected_index=index,
        selected_name=bank[index].name,
        per_wavelet_max=tuple(float(v) for v in maxima),
        record_id=x.record_id,
    )
