"""Daubechies filters and the multi-level discrete wavelet transform.

Filters are derived by spectral factorization of the Daubechies half-band
polynomial, so no coefficient table is shipped with the package.  The
transform is the usual Mallat cascade: correlate the running approximation
with the lowpass/highpass pair (convolution with the time-reversed
filters) at every even offset, then repeat on the lowpass output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from pathlib import Path

import numpy as np

from .signal_io import Signal, write_signal

BOUNDARY_MODES = ("periodic", "symmetric")
MAX_ORDER = 8


@dataclass(frozen=True)
class WaveletFilter:
    """Quadrature mirror filter pair of the Daubechies wavelet ``db<order>``."""

    order: int
    lowpass: np.ndarray
    highpass: np.ndarray

    @property
    def length(self) -> int:
        return self.lowpass.shape[0]


@lru_cache(maxsize=None)
def _daubechies_lowpass(order):
    # Half-band polynomial P(y) = sum_k C(N-1+k, k) y^k with y = sin^2(w/2).
    # Each root y maps to a reciprocal pair z, 1/z through z + 1/z = 2 - 4y;
    # keeping the root inside the unit circle gives the minimum-phase filter.
    poly = [comb(order - 1 + k, k) for k in range(order)][::-1]
    q = np.array([1.0 + 0j])
    for y in (np.roots(poly) if order > 1 else ()):
        zs = np.roots([1.0, -(2.0 - 4.0 * y), 1.0])
        q = np.convolve(q, [1.0, -zs[np.argmin(np.abs(zs))]])
    binom = np.array([comb(order, k) for k in range(order + 1)], dtype=np.float64)
    h = np.convolve(binom, q).real
    h *= np.sqrt(2.0) / h.sum()
    h.setflags(write=False)
    return h


def daubechies_filter(order: int = 6) -> WaveletFilter:
    """Return the orthonormal ``db<order>`` filter pair, 1 <= order <= 8.

    The lowpass has ``2 * order`` taps, sums to sqrt(2) and has unit energy;
    the highpass is its alternating-sign mirror
    ``highpass[k] = (-1)**k * lowpass[2*order - 1 - k]``.
    """
    if isinstance(order, bool) or int(order) != order or not 1 <= order <= MAX_ORDER:
        raise ValueError(f"Daubechies order must be an integer in [1, {MAX_ORDER}], got {order!r}")
    order = int(order)
    h = _daubechies_lowpass(order)
    k = np.arange(h.shape[0])
    g = np.where(k % 2 == 0, 1.0, -1.0) * h[::-1]
    g.setflags(write=False)
    return WaveletFilter(order, h, g)


@dataclass
class Decomposition:
    """Coefficients of a multi-level DWT.

    ``approximations[k]`` and ``details[k]`` hold level ``k + 1``.
    ``input_lengths[k]`` is the length of the array that level ``k + 1``
    was computed from, which the inverse cascade truncates back to.
    """

    levels: int
    approximations: list[np.ndarray]
    details: list[np.ndarray]
    boundary_mode: str
    original_length: int
    filter: WaveletFilter
    input_lengths: list[int] = field(default_factory=list)
    sample_rate_hz: float | None = None

    def detail(self, level: int) -> np.ndarray:
        self._check_level(level)
        return self.details[level - 1]

    def approximation(self, level: int) -> np.ndarray:
        self._check_level(level)
        return self.approximations[level - 1]

    def _check_level(self, level):
        if not 1 <= level <= self.levels:
            raise ValueError(f"level must be in [1, {self.levels}], got {level}")


def _step_indices(n, L, mode):
    """Index matrix ``idx[k, j]`` of the sample multiplied by tap ``j`` for output ``k``.

    Returns ``(idx, ext_len, offset)``: the indices address an extended copy
    of the input of length ``ext_len`` whose sample ``offset`` is input sample 0.
    """
    j = np.arange(L)
    if mode == "periodic":
        m = n + (n % 2)
        k = np.arange(m // 2)
        return (2 * k[:, None] + j[None, :]) % m, m, 0
    # symmetric: every even start whose L taps touch the input proper
    ext_len = n + 2 * (L - 1)
    starts = np.arange(0, n + L - 1, 2)
    return starts[:, None] + j[None, :], ext_len, L - 1


def _extend(x, L, mode):
    if mode == "periodic":
        return np.append(x, x[-1]) if x.shape[0] % 2 else x
    return np.pad(x, L - 1, mode="symmetric")


def _analysis_step(x, filt, mode):
    idx, _, _ = _step_indices(x.shape[0], filt.length, mode)
    windows = _extend(x, filt.length, mode)[idx]
    return windows @ filt.lowpass, windows @ filt.highpass


def _synthesis_step(a, d, n, filt, mode):
    idx, ext_len, offset = _step_indices(n, filt.length, mode)
    weights = a[:, None] * filt.lowpass[None, :] + d[:, None] * filt.highpass[None, :]
    ext = np.bincount(idx.ravel(), weights=weights.ravel(), minlength=ext_len)
    return ext[offset:offset + n]


def dwt_decompose(signal, filter: WaveletFilter, levels: int, boundary_mode="periodic") -> Decomposition:
    """Multi-level DWT of ``signal`` (a Signal or 1d array).

    In periodic mode each level has ``ceil(n / 2)`` coefficients; an odd
    input is padded by repeating its last sample first.  In symmetric mode
    the input is mirror-extended by ``filter.length - 1`` samples on each
    side and each level has ``floor((n + L) / 2)`` coefficients.

    Level-1 Haar details are ``(x[2k] - x[2k+1]) / sqrt(2)``.

    Raises
    ------
    ValueError
        If ``levels < 1`` or a level's input is shorter than the filter.
    """
    if boundary_mode not in BOUNDARY_MODES:
        raise ValueError(f"boundary_mode must be one of {BOUNDARY_MODES}, got {boundary_mode!r}")
    if int(levels) != levels or levels < 1:
        raise ValueError(f"levels must be an integer >= 1, got {levels!r}")
    fs = signal.sample_rate_hz if isinstance(signal, Signal) else None
    x = np.asarray(signal.samples if isinstance(signal, Signal) else signal, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("signal must be one-dimensional")

    approximations, details, input_lengths = [], [], []
    current = x
    for level in range(1, levels + 1):
        if current.shape[0] < filter.length:
            raise ValueError(
                f"signal too short for {levels} levels of db{filter.order}: level {level} input has "
                f"{current.shape[0]} samples, filter has {filter.length} taps"
            )
        input_lengths.append(current.shape[0])
        current, d = _analysis_step(current, filter, boundary_mode)
        approximations.append(current)
        details.append(d)
    return Decomposition(
        levels=int(levels),
        approximations=approximations,
        details=details,
        boundary_mode=boundary_mode,
        original_length=x.shape[0],
        filter=filter,
        input_lengths=input_lengths,
        sample_rate_hz=fs,
    )


def _inverse_from(dec, level, a, d):
    # Run the inverse cascade from `level` down to the original grid.
    filt, mode = dec.filter, dec.boundary_mode
    x = _synthesis_step(a, d, dec.input_lengths[level - 1], filt, mode)
    for k in range(level - 1, 0, -1):
        x = _synthesis_step(x, np.zeros_like(dec.details[k - 1]), dec.input_lengths[k - 1], filt, mode)
    return x


def _as_signal(samples, dec, label):
    fs = dec.sample_rate_hz if dec.sample_rate_hz is not None else 1.0
    return Signal(samples, fs, label)


def reconstruct_detail(decomposition: Decomposition, level: int) -> Signal:
    """Project the level-``level`` detail back onto the original sampling grid."""
    decomposition._check_level(level)
    d = decomposition.details[level - 1]
    x = _inverse_from(decomposition, level, np.zeros_like(decomposition.approximations[level - 1]), d)
    return _as_signal(x, decomposition, f"d{level}")


def reconstruct_approximation(decomposition: Decomposition, level: int | None = None) -> Signal:
    """Project the level-``level`` approximation (default: deepest) back to the original grid."""
    level = decomposition.levels if level is None else level
    decomposition._check_level(level)
    a = decomposition.approximations[level - 1]
    x = _inverse_from(decomposition, level, a, np.zeros_like(decomposition.details[level - 1]))
    return _as_signal(x, decomposition, f"a{level}")


def waverec(decomposition: Decomposition) -> np.ndarray:
    """Full inverse transform from the deepest approximation and all details."""
    dec = decomposition
    x = dec.approximations[-1]
    for k in range(dec.levels, 0, -1):
        x = _synthesis_step(x, dec.details[k - 1], dec.input_lengths[k - 1], dec.filter, dec.boundary_mode)
    return x


def dump_coefficients(decomposition: Decomposition, directory):
    """Write every coefficient array as ``a<k>.csv`` / ``d<k>.csv`` (csv-1col)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for k in range(1, decomposition.levels + 1):
        for name, arr in (("a", decomposition.approximations[k - 1]), ("d", decomposition.details[k - 1])):
            write_signal(Signal(arr, 1.0), directory / f"{name}{k}.csv")
