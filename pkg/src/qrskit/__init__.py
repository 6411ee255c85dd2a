"""Wavelet-based P-QRS-T detection, interval measurement and rule-table diagnosis for ECG signals."""

from .analysis import (
    DiagnosisReport,
    Flag,
    IntervalSet,
    RuleRow,
    analyze,
    builtin_rules,
    diagnose,
    load_rules,
    measure_amplitudes,
    measure_intervals,
)
from .detector import (
    DetectionError,
    DetectionTrace,
    DetectorConfig,
    NoBeatsError,
    Peak,
    PeakSet,
    compute_threshold,
    derivative_filter,
    detect,
    find_windows,
    fuse_d1,
    fuse_d2,
    locate_pqrst,
    moving_window_integrate,
    square_signal,
)
from .signal_io import Signal, SignalFormatError, load_signal, write_report, write_signal
from .synth import GroundTruth, SynthConfig, generate
from .wavelet import (
    Decomposition,
    WaveletFilter,
    daubechies_filter,
    dwt_decompose,
    reconstruct_approximation,
    reconstruct_detail,
    waverec,
)

__version__ = "0.1.0"
