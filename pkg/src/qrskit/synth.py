"""Synthetic ECG built from Gaussian bumps at known sample positions.

Every P, Q, R, S and T wave is a single Gaussian centred exactly on an
integer sample, so the ground-truth annotation is the centre index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .signal_io import Signal

LABELS = ("P", "Q", "R", "S", "T")

DEFAULT_AMPLITUDES = {"P": 0.25, "Q": -0.1, "R": 1.60, "S": -0.2, "T": 0.3}
# Gaussian standard deviations, ms
DEFAULT_WIDTHS = {"P": 20.0, "Q": 8.0, "R": 8.0, "S": 8.0, "T": 30.0}
# centre offsets from R, ms
DEFAULT_OFFSETS = {"P": -160.0, "Q": -45.0, "R": 0.0, "S": 45.0, "T": 320.0}


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of :func:`generate`.

    ``rr_s`` is either one spacing used for every beat or a sequence of
    ``n_beats - 1`` spacings.  ``rr_jitter`` adds seeded Gaussian jitter
    with that relative standard deviation.  ``noise_std_mv`` adds seeded
    white noise.
    """

    sample_rate_hz: float = 360.0
    n_beats: int = 60
    rr_s: float | tuple[float, ...] = 0.8
    rr_jitter: float = 0.0
    amplitudes_mv: dict = field(default_factory=lambda: dict(DEFAULT_AMPLITUDES))
    widths_ms: dict = field(default_factory=lambda: dict(DEFAULT_WIDTHS))
    offsets_ms: dict = field(default_factory=lambda: dict(DEFAULT_OFFSETS))
    noise_std_mv: float = 0.0
    seed: int = 0
    lead_in_s: float = 0.5
    tail_s: float = 0.6


@dataclass
class GroundTruth:
    """True sample index of each label, one entry per beat."""

    indices: dict[str, np.ndarray]

    def to_dict(self) -> dict:
        return {label: [int(i) for i in self.indices[label]] for label in LABELS}


def _rr_sequence(config, rng):
    n = config.n_beats
    if np.ndim(config.rr_s) == 0:
        rr = np.full(max(n - 1, 0), float(config.rr_s))
    else:
        rr = np.asarray(config.rr_s, dtype=np.float64)
        if rr.shape != (max(n - 1, 0),):
            raise ValueError(f"rr_s needs {n - 1} spacings for {n} beats, got {rr.shape[0]}")
    if config.rr_jitter:
        rr = rr * (1.0 + config.rr_jitter * rng.standard_normal(rr.shape[0]))
    return rr


def _validate(config, rr):
    if int(config.n_beats) != config.n_beats or config.n_beats < 1:
        raise ValueError("n_beats must be an integer >= 1")
    if config.sample_rate_hz <= 0:
        raise ValueError("sample_rate_hz must be positive")
    if config.noise_std_mv < 0:
        raise ValueError("noise_std_mv must be non-negative")
    for table in (config.amplitudes_mv, config.widths_ms, config.offsets_ms):
        missing = set(LABELS) - set(table)
        if missing:
            raise ValueError(f"missing entries for {sorted(missing)}")
    if any(config.widths_ms[k] <= 0 for k in LABELS):
        raise ValueError("widths must be positive")
    min_rr = sum(config.widths_ms.values()) / 1000.0
    if rr.size and np.min(rr) <= min_rr:
        raise ValueError(f"every R-R spacing must exceed the summed widths ({min_rr:.3f} s)")
    offs = [config.offsets_ms[k] for k in LABELS]
    if any(b <= a for a, b in zip(offs, offs[1:])):
        raise ValueError("offsets must increase in P, Q, R, S, T order")


def generate(config: SynthConfig = SynthConfig()) -> tuple[Signal, GroundTruth]:
    """Generate a synthetic ECG and its ground-truth annotation.

    Deterministic for a fixed ``config`` (including ``seed``).
    """
    rng = np.random.default_rng(config.seed)
    rr = _rr_sequence(config, rng)
    _validate(config, rr)
    fs = float(config.sample_rate_hz)

    first_r = int(round(config.lead_in_s * fs))
    r_idx = first_r + np.concatenate([[0], np.cumsum(np.round(rr * fs).astype(np.int64))]).astype(np.int64)
    n = int(r_idx[-1] + round(config.tail_s * fs)) + 1

    t = np.arange(n, dtype=np.float64)
    x = np.zeros(n)
    truth = {}
    for label in LABELS:
        centres = r_idx + int(round(config.offsets_ms[label] * fs / 1000.0))
        sigma = config.widths_ms[label] * fs / 1000.0
        amp = config.amplitudes_mv[label]
        reach = int(np.ceil(12 * sigma))
        for c in centres:
            lo, hi = max(c - reach, 0), min(c + reach + 1, n)
            x[lo:hi] += amp * np.exp(-0.5 * ((t[lo:hi] - c) / sigma) ** 2)
        truth[label] = centres
    if any(np.any((v < 0) | (v >= n)) for v in truth.values()):
        raise ValueError("lead_in_s / tail_s too short for the wave offsets")
    if config.noise_std_mv:
        x = x + config.noise_std_mv * rng.standard_normal(n)
    return Signal(x, fs, "synthetic"), GroundTruth(truth)
