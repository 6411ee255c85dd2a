"""Wavelet-fused QRS detection and P-QRS-T labelling.

Pipeline::

    db6, 8 levels -> D2 = d4 * (d3 + d5) / 2**n -> 5-point derivative
    -> point-wise square -> moving-window mean -> max-normalize
    -> threshold at mean -> windows -> peaks on the original signal
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .signal_io import Signal
from .wavelet import Decomposition, daubechies_filter, dwt_decompose, reconstruct_detail

LABELS = ("P", "Q", "R", "S", "T")


class DetectionError(ValueError):
    """Domain error raised by the detector."""


class NoBeatsError(DetectionError):
    def __init__(self, msg="no beats found"):
        super().__init__(msg)


@dataclass(frozen=True)
class DetectorConfig:
    """Tunable parameters of :func:`detect`.

    Search ranges for P/Q/S/T are offsets from the R index in milliseconds:
    Q in ``[R - q_search_ms, R)``, S in ``(R, R + s_search_ms]``,
    P in ``[R - p_search_ms[0], R - p_search_ms[1])`` and
    T in ``(R + t_search_ms[0], R + t_search_ms[1]]``.
    """

    wavelet_order: int = 6
    levels: int = 8
    fused_levels: tuple[int, ...] = (3, 4, 5)
    window_ms: float = 100.0
    refractory_ms: float = 200.0
    q_search_ms: float = 50.0
    s_search_ms: float = 50.0
    p_search_ms: tuple[float, float] = (200.0, 50.0)
    t_search_ms: tuple[float, float] = (100.0, 400.0)
    feature: str = "d2"
    boundary_mode: str = "periodic"
    min_run: int = 3

    def __post_init__(self):
        if self.window_ms <= 0:
            raise ValueError("window_ms must be positive")
        if self.refractory_ms <= 0:
            raise ValueError("refractory_ms must be positive")
        if self.levels < 1:
            raise ValueError("levels must be >= 1")
        if not self.fused_levels or not all(1 <= k <= self.levels for k in self.fused_levels):
            raise ValueError(f"fused_levels {self.fused_levels} must lie in [1, {self.levels}]")
        if self.feature == "d2" and len(self.fused_levels) != 3:
            raise ValueError("the d2 feature needs exactly three fused levels")
        if self.feature not in ("d1", "d2"):
            raise ValueError(f"feature must be 'd1' or 'd2', got {self.feature!r}")

    def samples(self, ms, fs) -> int:
        return int(round(ms * fs / 1000.0))

    def window_samples(self, fs) -> int:
        return max(1, self.samples(self.window_ms, fs))

    def refractory_samples(self, fs) -> int:
        return max(1, self.samples(self.refractory_ms, fs))


@dataclass(frozen=True)
class Peak:
    label: str
    index: int
    amplitude_mv: float
    beat: int


@dataclass
class PeakSet:
    peaks: list[Peak]
    sample_rate_hz: float

    def indices(self, label) -> np.ndarray:
        return np.array([p.index for p in self.peaks if p.label == label], dtype=np.int64)

    def by_beat(self) -> dict[int, dict[str, Peak]]:
        beats: dict[int, dict[str, Peak]] = {}
        for p in self.peaks:
            beats.setdefault(p.beat, {})[p.label] = p
        return dict(sorted(beats.items()))

    def __len__(self):
        return len(self.peaks)


@dataclass
class DetectionTrace:
    d1: Signal
    d2: Signal
    derivative: Signal
    squared: Signal
    integrated: Signal
    normalized: Signal
    threshold: float
    windows: list[tuple[int, int]]
    decomposition: Decomposition | None = field(default=None, repr=False)

    def stages(self) -> dict[str, Signal]:
        return {
            "d1": self.d1,
            "d2": self.d2,
            "derivative": self.derivative,
            "squared": self.squared,
            "integrated": self.integrated,
            "normalized": self.normalized,
        }


def _details(decomposition, levels):
    missing = [k for k in levels if not 1 <= k <= decomposition.levels]
    if missing:
        raise DetectionError(f"decomposition has {decomposition.levels} levels; missing level(s) {missing}")
    return [reconstruct_detail(decomposition, k) for k in levels]


def fuse_d1(decomposition: Decomposition, levels=(3, 4, 5)) -> Signal:
    """Sum of the reconstructed details at ``levels`` (d3 + d4 + d5 by default)."""
    parts = _details(decomposition, levels)
    out = np.zeros(decomposition.original_length)
    for p in parts:
        out += p.samples
    return parts[0].with_samples(out, label="D1")


def fuse_d2(decomposition: Decomposition, n: int | None = None, levels=(3, 4, 5)) -> Signal:
    """``d4 * (d3 + d5) / 2**n`` on the reconstructed details.

    ``levels`` names (d3, d4, d5); the middle one is the multiplier.
    ``n`` defaults to the decomposition depth.
    """
    n = decomposition.levels if n is None else n
    lo, mid, hi = _details(decomposition, levels)
    out = mid.samples * (lo.samples + hi.samples) / 2.0**n
    return mid.with_samples(out, label="D2")


def derivative_filter(signal: Signal) -> Signal:
    """Five-point derivative ``(T/8)(-x[n-2] - 2x[n-1] + 2x[n+1] + x[n+2])``.

    Non-causal and centred, so there is no delay; samples beyond the ends
    are taken as zero.
    """
    x = signal.samples
    if x.shape[0] < 5:
        raise DetectionError(f"derivative filter needs at least 5 samples, got {x.shape[0]}")
    kernel = np.array([-1.0, -2.0, 0.0, 2.0, 1.0]) * (signal.period / 8.0)
    padded = np.concatenate([np.zeros(2), x, np.zeros(2)])
    return signal.with_samples(np.correlate(padded, kernel, mode="valid"), label="derivative")


def square_signal(signal: Signal) -> Signal:
    return signal.with_samples(signal.samples * signal.samples, label="squared")


def moving_window_integrate(signal: Signal, N: int) -> Signal:
    """Trailing mean over the last ``N`` samples.

    The first ``N - 1`` outputs average over the samples available so far.
    """
    if int(N) != N or N < 1:
        raise DetectionError(f"integration window must be an integer >= 1, got {N!r}")
    N = int(N)
    x = signal.samples
    sums = np.convolve(x, np.ones(N))[: x.shape[0]]
    counts = np.minimum(np.arange(1, x.shape[0] + 1), N)
    return signal.with_samples(sums / counts, label="integrated")


def compute_threshold(integrated: Signal) -> tuple[Signal, float]:
    """Max-normalize and return ``(normalized, max * mean)`` of the normalized trace."""
    x = integrated.samples
    peak = float(np.max(x)) if x.size else 0.0
    if not np.isfinite(peak) or peak <= 0.0:
        raise NoBeatsError()
    normalized = x / peak
    threshold = float(np.max(normalized) * np.mean(normalized))
    return integrated.with_samples(normalized, label="normalized"), threshold


def find_windows(normalized, threshold: float, refractory: int, min_run: int = 3) -> list[tuple[int, int]]:
    """Inclusive ``(start, end)`` runs of samples at or above ``threshold``.

    Runs shorter than ``min_run`` samples are dropped; surviving runs whose
    gap is smaller than ``refractory`` samples are merged.
    """
    x = normalized.samples if isinstance(normalized, Signal) else np.asarray(normalized)
    above = np.concatenate([[False], x >= threshold, [False]])
    edges = np.flatnonzero(np.diff(above.astype(np.int8)))
    runs = [(int(s), int(e) - 1) for s, e in zip(edges[::2], edges[1::2]) if e - s >= min_run]
    merged: list[tuple[int, int]] = []
    for start, end in runs:
        if merged and start - merged[-1][1] - 1 < refractory:
            merged[-1] = (merged[-1][0], end)
        else:
            merged.append((start, end))
    return merged


def _arg(x, lo, hi, fn):
    # fn over x[lo:hi] clipped to bounds, None when empty; np.argmax/argmin pick the earliest tie
    lo, hi = max(lo, 0), min(hi, x.shape[0])
    if hi <= lo:
        return None
    return lo + int(fn(x[lo:hi]))


def locate_pqrst(original: Signal, windows, config: DetectorConfig = DetectorConfig()) -> PeakSet:
    """Label P, Q, R, S, T inside each detection window.

    R is the maximum of ``original`` over the window extended to the left by
    one integration window, which absorbs the lag of the trailing mean.
    When two R candidates fall within the refractory period the larger one
    is kept.
    """
    x = original.samples
    fs = original.sample_rate_hz
    lag = config.window_samples(fs)
    refractory = config.refractory_samples(fs)

    r_list: list[int] = []
    for start, end in windows:
        r = _arg(x, start - lag, end + 1, np.argmax)
        if r is None:
            continue
        if r_list and r - r_list[-1] < refractory:
            if x[r] > x[r_list[-1]]:
                r_list[-1] = r
            continue
        r_list.append(r)

    ms = lambda v: config.samples(v, fs)  # noqa: E731
    peaks = []
    for beat, r in enumerate(r_list):
        found = {
            "P": _arg(x, r - ms(config.p_search_ms[0]), r - ms(config.p_search_ms[1]), np.argmax),
            "Q": _arg(x, r - ms(config.q_search_ms), r, np.argmin),
            "R": r,
            "S": _arg(x, r + 1, r + ms(config.s_search_ms) + 1, np.argmin),
            "T": _arg(x, r + ms(config.t_search_ms[0]) + 1, r + ms(config.t_search_ms[1]) + 1, np.argmax),
        }
        for label in LABELS:
            idx = found[label]
            if idx is not None:
                peaks.append(Peak(label, idx, float(x[idx]), beat))
    return PeakSet(peaks, fs)


def detect(signal: Signal, config: DetectorConfig = DetectorConfig()) -> tuple[PeakSet, DetectionTrace]:
    """Run the full detector on ``signal``.

    Raises
    ------
    NoBeatsError
        When the feature trace is flat or no window crosses the threshold.
    ValueError
        When the signal is too short for the requested decomposition.
    """
    if len(signal) == 0:
        raise NoBeatsError()
    fs = signal.sample_rate_hz
    dec = dwt_decompose(signal, daubechies_filter(config.wavelet_order), config.levels, config.boundary_mode)
    d1 = fuse_d1(dec, config.fused_levels)
    d2 = fuse_d2(dec, dec.levels, config.fused_levels) if len(config.fused_levels) == 3 else None
    feature = d2 if config.feature == "d2" else d1
    derivative = derivative_filter(feature)
    squared = square_signal(derivative)
    integrated = moving_window_integrate(squared, config.window_samples(fs))
    normalized, threshold = compute_threshold(integrated)
    if threshold >= 1.0:
        raise NoBeatsError()
    windows = find_windows(normalized, threshold, config.refractory_samples(fs), config.min_run)
    if not windows:
        raise NoBeatsError()
    peaks = locate_pqrst(signal, windows, config)
    trace = DetectionTrace(
        d1=d1,
        d2=d2 if d2 is not None else d1.with_samples(np.zeros(len(d1)), label="D2"),
        derivative=derivative,
        squared=squared,
        integrated=integrated,
        normalized=normalized,
        threshold=threshold,
        windows=windows,
        decomposition=dec,
    )
    return peaks, trace
