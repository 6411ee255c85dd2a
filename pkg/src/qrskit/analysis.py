"""Interval / amplitude measurement and rule-table diagnosis."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .detector import PeakSet

INTERVAL_KEYS = ("PR", "QRS", "QT", "ST", "PP", "RR")
AMPLITUDE_KEYS = ("P", "Q", "R", "S", "T")
RULES_ENV = "QRSKIT_RULES"


@dataclass
class IntervalSet:
    """Per-beat intervals in seconds."""

    PR: np.ndarray = field(default_factory=lambda: np.zeros(0))
    QRS: np.ndarray = field(default_factory=lambda: np.zeros(0))
    QT: np.ndarray = field(default_factory=lambda: np.zeros(0))
    ST: np.ndarray = field(default_factory=lambda: np.zeros(0))
    PP: np.ndarray = field(default_factory=lambda: np.zeros(0))
    RR: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def get(self, key) -> np.ndarray:
        return getattr(self, key)


@dataclass(frozen=True)
class RuleRow:
    """One row of a normal-range table.

    ``measure`` is a report key such as ``"RR_s"`` or ``"T_mv"``.  A row
    whose low and high coincide is widened by ``tolerance`` (relative)
    before comparison.  With ``relative_to`` set, both bounds are
    multiples of that label's measured amplitude; ``absolute`` compares the
    magnitude of the measured value.
    """

    measure: str
    low: float
    high: float
    below_finding: str | None = None
    above_finding: str | None = None
    units: str = "s"
    tolerance: float = 0.0
    relative_to: str | None = None
    absolute: bool = False

    def __post_init__(self):
        if self.low > self.high:
            raise ValueError(f"rule {self.measure}: low {self.low} > high {self.high}")

    def bounds(self, amplitudes=None) -> tuple[float, float]:
        low, high = self.low, self.high
        if self.relative_to is not None:
            ref = (amplitudes or {}).get(self.relative_to)
            if ref is None or not np.isfinite(ref):
                return float("nan"), float("nan")
            low, high = low * abs(ref), high * abs(ref)
        return low - self.tolerance * abs(low), high + self.tolerance * abs(high)


def builtin_rules() -> list[RuleRow]:
    """Normal-sinus-rhythm ranges with their below/above findings."""
    return [
        RuleRow("PR_s", 0.12, 0.2, "Reduced FMD", "Blockage of AV node; atherosclerotic disease"),
        RuleRow("QRS_s", 0.09, 0.09, "Hyperkalemia", None, tolerance=0.1),
        RuleRow("QT_s", 0.35, 0.44),
        RuleRow("ST_s", 0.05, 0.15),
        RuleRow("PP_s", 0.11, 0.11, tolerance=0.1),
        RuleRow("RR_s", 0.80, 0.85, "Tachycardia (Fast heart)", "Bradycardia (Slow heart)"),
        RuleRow("P_mv", 0.25, 0.25, "Dextrocardia (inverted P wave)", None, units="mV", tolerance=0.1),
        RuleRow("Q_mv", 0.0, 0.25, units="mV", relative_to="R", absolute=True),
        RuleRow("R_mv", 1.60, 1.60, units="mV", tolerance=0.1),
        RuleRow(
            "T_mv", 0.1, 0.5, "Myocardial ischemia (inverted T wave)",
            "Hyperkalemia (Tall T wave & absence of P wave)", units="mV",
        ),
    ]


def rules_to_json(rules) -> str:
    return json.dumps({"rows": [asdict(r) for r in rules]}, indent=2, sort_keys=True) + "\n"


def load_rules(path=None) -> list[RuleRow]:
    """Read a rule table from JSON, falling back to ``$QRSKIT_RULES`` and then the builtin table.

    The file holds either a list of rows or ``{"rows": [...]}``, each row
    with the :class:`RuleRow` field names.
    """
    path = path or os.environ.get(RULES_ENV)
    if not path:
        return builtin_rules()
    data = json.loads(Path(path).read_text())
    rows = data["rows"] if isinstance(data, dict) else data
    try:
        return [RuleRow(**row) for row in rows]
    except TypeError as exc:
        raise ValueError(f"{path}: bad rule row ({exc})") from None


@dataclass(frozen=True)
class Flag:
    rule: str
    measured: float
    bound: float
    finding: str
    side: str
    heuristic: bool = False


@dataclass
class DiagnosisReport:
    intervals: IntervalSet
    amplitudes: dict[str, float | None]
    flags: list[Flag]
    peaks: PeakSet | None = None
    signal_label: str | None = None
    n_samples: int = 0
    sample_rate_hz: float | None = None


def measure_intervals(peaks: PeakSet) -> IntervalSet:
    """RR and PP from consecutive same-label peaks; PR, QRS, QT, ST within each beat."""
    fs = peaks.sample_rate_hz

    def consecutive(label):
        idx = np.sort(peaks.indices(label))
        return np.diff(idx) / fs

    spans = {k: [] for k in ("PR", "QRS", "QT", "ST")}
    pairs = {"PR": ("P", "R"), "QRS": ("Q", "S"), "QT": ("Q", "T"), "ST": ("S", "T")}
    for beat in peaks.by_beat().values():
        for key, (a, b) in pairs.items():
            if a in beat and b in beat:
                spans[key].append((beat[b].index - beat[a].index) / fs)
    return IntervalSet(
        PR=np.array(spans["PR"]),
        QRS=np.array(spans["QRS"]),
        QT=np.array(spans["QT"]),
        ST=np.array(spans["ST"]),
        PP=consecutive("P"),
        RR=consecutive("R"),
    )


def measure_amplitudes(signal, peaks: PeakSet) -> dict[str, float | None]:
    """Mean baseline-corrected amplitude per label; the baseline is the signal median."""
    x = signal.samples
    baseline = float(np.median(x))
    out = {}
    for label in "PQRST":
        idx = peaks.indices(label)
        out[label] = float(np.mean(x[idx] - baseline)) if idx.size else None
    return out


def _measure_values(rule, intervals, amplitudes, per_beat):
    key, _, unit = rule.measure.rpartition("_")
    if unit == "s" and key in INTERVAL_KEYS:
        values = np.asarray(intervals.get(key), dtype=np.float64)
        if values.size == 0:
            return []
        return list(values) if per_beat else [float(np.mean(values))]
    if unit == "mv" and key in AMPLITUDE_KEYS:
        value = amplitudes.get(key)
        return [] if value is None else [float(value)]
    raise ValueError(f"unknown rule measure {rule.measure!r}")


def sa_block_flag(rr, factor=1.8) -> Flag | None:
    """Heuristic dropped-beat check: any R-R longer than ``factor`` times the median."""
    rr = np.asarray(rr, dtype=np.float64)
    if rr.size < 2:
        return None
    bound = factor * float(np.median(rr))
    worst = float(np.max(rr))
    if worst > bound:
        return Flag("SA_block_heuristic", worst, bound, "Sinoatrial block (heuristic: dropped cardiac cycle)", "above", True)
    return None


def diagnose(intervals: IntervalSet, amplitudes, rules=None, per_beat=False, sa_block=True) -> DiagnosisReport:
    """Compare measurements with ``rules`` and collect flags.

    Each rule sees the mean of its measured array (every beat when
    ``per_beat``).  A value strictly outside the row's bounds raises the
    finding for that side; sides without a finding never flag.
    """
    rules = builtin_rules() if rules is None else rules
    flags = []
    for rule in rules:
        low, high = rule.bounds(amplitudes)
        if np.isnan(low):
            continue
        for value in _measure_values(rule, intervals, amplitudes, per_beat):
            v = abs(value) if rule.absolute else value
            if v < low and rule.below_finding:
                flags.append(Flag(rule.measure, value, low, rule.below_finding, "below"))
            elif v > high and rule.above_finding:
                flags.append(Flag(rule.measure, value, high, rule.above_finding, "above"))
    if sa_block:
        flag = sa_block_flag(intervals.RR)
        if flag is not None:
            flags.append(flag)
    return DiagnosisReport(intervals, dict(amplitudes), flags)


def analyze(signal, peaks: PeakSet, rules=None, per_beat=False) -> DiagnosisReport:
    """Measure and diagnose in one call, filling the report's signal metadata."""
    report = diagnose(measure_intervals(peaks), measure_amplitudes(signal, peaks), rules, per_beat)
    report.peaks = peaks
    report.signal_label = signal.label
    report.n_samples = len(signal)
    report.sample_rate_hz = signal.sample_rate_hz
    return report
