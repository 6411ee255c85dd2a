"""Command-line entry point: ``qrskit {detect,analyze,synth,plot}``.

Exit codes: 0 on success, 1 on a domain error (no beats, malformed
signal file), 2 on a usage error (bad flag, missing rate, missing file).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import analysis, signal_io
from .detector import DetectionError, DetectorConfig, detect
from .plot import render_svg
from .signal_io import FORMATS, Signal, SignalFormatError
from .synth import SynthConfig, generate


class UsageError(Exception):
    pass


def _positive(kind):
    def parse(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {text!r}") from None
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    return parse


def _non_negative(text):
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _input_args(p):
    p.add_argument("input", type=Path, help="signal file")
    p.add_argument("--format", choices=FORMATS, default="csv-1col")
    p.add_argument("--rate", type=_positive(float), help="sampling rate in Hz (ignored for csv-2col)")


def _detector_args(p):
    d = DetectorConfig()
    p.add_argument("--wavelet-order", type=int, default=d.wavelet_order, choices=range(1, 9), metavar="{1..8}")
    p.add_argument("--levels", type=_positive(int), default=d.levels)
    p.add_argument("--window-ms", type=_positive(float), default=d.window_ms)
    p.add_argument("--refractory-ms", type=_positive(float), default=d.refractory_ms)
    p.add_argument("--feature", choices=("d1", "d2"), default=d.feature)
    p.add_argument("--boundary", choices=("periodic", "symmetric"), default=d.boundary_mode)
    p.add_argument("--dump-trace", type=Path, metavar="DIR", help="write every pipeline stage as csv-1col")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrskit", description="Wavelet-based P-QRS-T detection for ECG signals.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect labelled peaks, write PeakSet JSON")
    _input_args(p)
    _detector_args(p)
    p.add_argument("-o", "--output", type=Path, help="JSON output (default: stdout)")

    p = sub.add_parser("analyze", help="detect, measure intervals and flag rule violations")
    _input_args(p)
    _detector_args(p)
    p.add_argument("--rules", type=Path, help=f"rule table JSON (default: ${analysis.RULES_ENV} or builtin)")
    p.add_argument("--per-beat", action="store_true", help="flag each beat instead of the record mean")
    p.add_argument("-o", "--output", type=Path, help="report JSON (default: stdout)")

    p = sub.add_parser("synth", help="generate a synthetic ECG with ground truth")
    p.add_argument("-o", "--output", type=Path, required=True, help="signal file; ground truth goes to <output>.truth.json")
    p.add_argument("--format", choices=FORMATS, default="csv-1col")
    p.add_argument("--rate", type=_positive(float), default=360.0)
    p.add_argument("--beats", type=_positive(int), default=10)
    p.add_argument("--rr-s", type=_positive(float), default=0.8)
    p.add_argument("--rr-jitter", type=_non_negative, default=0.0)
    p.add_argument("--noise-std", type=_non_negative, default=0.0)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("plot", help="SVG plots of the signal, peaks and every pipeline stage")
    _input_args(p)
    _detector_args(p)
    p.add_argument("-o", "--output", type=Path, required=True, metavar="DIR")
    return parser


def _config(args) -> DetectorConfig:
    try:
        return DetectorConfig(
            wavelet_order=args.wavelet_order,
            levels=args.levels,
            window_ms=args.window_ms,
            refractory_ms=args.refractory_ms,
            feature=args.feature,
            boundary_mode=args.boundary,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(args) -> Signal:
    if args.format != "csv-2col" and args.rate is None:
        raise UsageError(f"--rate is required for --format {args.format}")
    if not args.input.is_file():
        raise UsageError(f"{args.input}: no such file")
    return signal_io.load_signal(args.input, args.format, args.rate)


def _check_parent(path):
    if path is not None and not path.parent.is_dir():
        raise UsageError(f"{path.parent}: directory does not exist")


def detection_dict(signal, peaks, trace) -> dict:
    return {
        "signal": signal_io.signal_header(signal.label, len(signal), signal.sample_rate_hz),
        "peaks": signal_io.peak_records(peaks),
        "threshold": signal_io._fmt(trace.threshold),
        "windows": [[int(s), int(e)] for s, e in trace.windows],
    }


def _emit(obj, path):
    if path is None:
        sys.stdout.write(signal_io.dumps(obj))
    else:
        signal_io.write_json(obj, path)


def _dump_trace(signal, trace, directory):
    directory.mkdir(parents=True, exist_ok=True)
    signal_io.write_signal(signal, directory / "original.csv")
    for name, stage in trace.stages().items():
        signal_io.write_signal(stage, directory / f"{name}.csv")


def _run(args) -> int:
    if args.command == "synth":
        _check_parent(args.output)
        cfg = SynthConfig(
            sample_rate_hz=args.rate,
            n_beats=args.beats,
            rr_s=args.rr_s,
            rr_jitter=args.rr_jitter,
            noise_std_mv=args.noise_std,
            seed=args.seed,
        )
        try:
            signal, truth = generate(cfg)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        signal_io.write_signal(signal, args.output, args.format)
        sidecar = {
            "format": args.format,
            "sample_rate_hz": cfg.sample_rate_hz,
            "n_samples": len(signal),
            "seed": cfg.seed,
            "truth": truth.to_dict(),
        }
        signal_io.write_json(sidecar, args.output.with_name(args.output.name + ".truth.json"))
        return 0

    config = _config(args)
    _check_parent(args.output)
    rules = None
    if args.command == "analyze":
        try:
            rules = analysis.load_rules(args.rules)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read rules: {exc}") from None
    signal = _load(args)
    peaks, trace = detect(signal, config)
    if args.dump_trace is not None:
        _dump_trace(signal, trace, args.dump_trace)

    if args.command == "detect":
        _emit(detection_dict(signal, peaks, trace), args.output)
    elif args.command == "analyze":
        report = analysis.analyze(signal, peaks, rules, per_beat=args.per_beat)
        _emit(signal_io.report_to_dict(report), args.output)
    elif args.command == "plot":
        out = args.output
        out.mkdir(parents=True, exist_ok=True)
        title = signal.label or "signal"
        signal_io._atomic_write(out / "peaks.svg", render_svg(signal, peaks, f"{title}: P-QRS-T").encode())
        signal_io._atomic_write(out / "original.svg", render_svg(signal, title=f"{title}: original").encode())
        for name, stage in trace.stages().items():
            thr = trace.threshold if name == "normalized" else None
            signal_io._atomic_write(out / f"{name}.svg", render_svg(stage, title=name, threshold=thr).encode())
        signal_io.write_json(detection_dict(signal, peaks, trace), out / "detect.json")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except UsageError as exc:
        print(f"qrskit: error: {exc}", file=sys.stderr)
        return 2
    except (DetectionError, SignalFormatError) as exc:
        print(f"qrskit: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # e.g. signal too short for the requested decomposition depth
        print(f"qrskit: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
