"""Reading ECG signals from disk and writing reports / plot data."""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

FORMATS = ("csv-1col", "csv-2col", "raw-f64le")


class SignalFormatError(ValueError):
    """Raised when a signal file cannot be parsed."""


@dataclass(frozen=True)
class Signal:
    """A uniformly sampled amplitude sequence.

    Attributes
    ----------
    samples : 1d ndarray of float64
        Amplitudes in millivolts.
    sample_rate_hz : float
        Samples per second, strictly positive.
    label : str, optional
        Free-text name carried into reports.
    """

    samples: np.ndarray
    sample_rate_hz: float
    label: str | None = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        rate = float(self.sample_rate_hz)
        if not (math.isfinite(rate) and rate > 0):
            raise ValueError(f"sample_rate_hz must be positive and finite, got {self.sample_rate_hz!r}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate_hz", rate)

    @property
    def period(self) -> float:
        """Sampling period T in seconds."""
        return 1.0 / self.sample_rate_hz

    def __len__(self):
        return self.samples.shape[0]

    def with_samples(self, samples, label=None) -> Signal:
        return Signal(samples, self.sample_rate_hz, self.label if label is None else label)


def _parse_csv(text, ncols, path):
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        fields = [f.strip() for f in stripped.split(",")]
        if len(fields) != ncols:
            raise SignalFormatError(f"{path}:{lineno}: expected {ncols} column(s), got {len(fields)}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise SignalFormatError(f"{path}:{lineno}: non-numeric value in {stripped!r}") from None
    if not rows:
        raise SignalFormatError(f"{path}: empty file")
    return np.array(rows, dtype=np.float64)


def load_signal(path, format="csv-1col", sample_rate_hz=None, label=None) -> Signal:
    """Load a single-lead ECG signal.

    Parameters
    ----------
    path : str or Path
        File to read.
    format : {'csv-1col', 'csv-2col', 'raw-f64le'}
        ``csv-1col`` holds one amplitude per line, ``csv-2col`` holds
        ``time_s,amplitude`` pairs (no header) and ``raw-f64le`` is packed
        little-endian float64.
    sample_rate_hz : float
        Required for the rate-less formats. Ignored for ``csv-2col``, where
        the rate is inferred from the median time step.
    label : str, optional
        Defaults to the file stem.
    """
    path = Path(path)
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; choose from {', '.join(FORMATS)}")
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise SignalFormatError(f"{path}: cannot read ({exc.strerror})") from None
    label = path.stem if label is None else label

    if format == "raw-f64le":
        if not raw:
            raise SignalFormatError(f"{path}: empty file")
        if len(raw) % 8:
            raise SignalFormatError(f"{path}: size {len(raw)} is not a multiple of 8 bytes")
        if sample_rate_hz is None:
            raise ValueError("sample_rate_hz is required for raw-f64le")
        return Signal(np.frombuffer(raw, dtype="<f8").astype(np.float64), sample_rate_hz, label)

    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise SignalFormatError(f"{path}: not a text file") from None

    if format == "csv-1col":
        if sample_rate_hz is None:
            raise ValueError("sample_rate_hz is required for csv-1col")
        return Signal(_parse_csv(text, 1, path)[:, 0], sample_rate_hz, label)

    table = _parse_csv(text, 2, path)
    t = table[:, 0]
    steps = np.diff(t)
    if steps.size == 0:
        raise SignalFormatError(f"{path}: need at least two rows to infer the sampling rate")
    if np.any(steps <= 0):
        bad = int(np.argmax(steps <= 0)) + 2
        raise SignalFormatError(f"{path}:{bad}: time column is not strictly increasing")
    return Signal(table[:, 1], 1.0 / float(np.median(steps)), label)


def _atomic_write(path, data: bytes):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_signal(signal: Signal, path, format="csv-1col"):
    """Write samples in one of the supported formats.

    Decimal output uses 17 significant digits so that a csv round trip is exact.
    """
    x = signal.samples
    if format == "csv-1col":
        data = "".join(f"{v:.17g}\n" for v in x).encode()
    elif format == "csv-2col":
        T = signal.period
        data = "".join(f"{k * T:.17g},{v:.17g}\n" for k, v in enumerate(x)).encode()
    elif format == "raw-f64le":
        data = x.astype("<f8").tobytes()
    else:
        raise ValueError(f"unknown format {format!r}")
    _atomic_write(path, data)


def _fmt(value):
    # Fixed float formatting keeps reports byte-stable across runs.
    if value is None:
        return None
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_fmt(v) for v in value]
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(f"{value:.6f}") + 0.0


def peak_records(peaks) -> list[dict]:
    fs = peaks.sample_rate_hz
    return [
        {
            "label": p.label,
            "index": int(p.index),
            "time_s": _fmt(p.index / fs),
            "amplitude_mv": _fmt(p.amplitude_mv),
        }
        for p in peaks.peaks
    ]


def signal_header(label, n_samples, sample_rate_hz) -> dict:
    return {"label": label, "n_samples": int(n_samples), "sample_rate_hz": _fmt(sample_rate_hz)}


def report_to_dict(report) -> dict:
    """Convert a DiagnosisReport into the JSON-ready report schema."""
    iv = report.intervals
    return {
        "signal": signal_header(report.signal_label, report.n_samples, report.sample_rate_hz),
        "peaks": peak_records(report.peaks) if report.peaks is not None else [],
        "intervals": {
            "PR_s": _fmt(iv.PR),
            "QRS_s": _fmt(iv.QRS),
            "QT_s": _fmt(iv.QT),
            "ST_s": _fmt(iv.ST),
            "PP_s": _fmt(iv.PP),
            "RR_s": _fmt(iv.RR),
        },
        "amplitudes": {f"{k}_mv": _fmt(report.amplitudes.get(k)) for k in "PQRST"},
        "flags": [
            {
                "rule": f.rule,
                "measured": _fmt(f.measured),
                "bound": _fmt(f.bound),
                "finding": f.finding,
            }
            for f in report.flags
        ],
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(obj, path):
    _atomic_write(path, dumps(obj).encode())


def write_report(report, path):
    """Write a DiagnosisReport as sorted-key JSON."""
    write_json(report_to_dict(report), path)
