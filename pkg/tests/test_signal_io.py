import json
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrskit.analysis import DiagnosisReport, Flag, IntervalSet
from qrskit.detector import Peak, PeakSet
from qrskit.signal_io import Signal, SignalFormatError, load_signal, write_report, write_signal


def test_csv_1col(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("0.1\n0.2\n0.3")
    sig = load_signal(p, "csv-1col", 360)
    np.testing.assert_array_equal(sig.samples, [0.1, 0.2, 0.3])
    assert sig.sample_rate_hz == 360 and len(sig) == 3 and sig.label == "a"


def test_csv_2col_infers_rate(tmp_path):
    p = tmp_path / "b.csv"
    p.write_text("0.0,0.5\n0.005,0.7\n")
    sig = load_signal(p, "csv-2col", sample_rate_hz=999)
    np.testing.assert_array_equal(sig.samples, [0.5, 0.7])
    assert sig.sample_rate_hz == pytest.approx(200.0)


def test_csv_2col_median_step_tolerates_one_bad_stamp(tmp_path):
    t = np.arange(10) * 0.004
    t[5] += 0.001
    p = tmp_path / "c.csv"
    p.write_text("".join(f"{a},{k}\n" for k, a in enumerate(t)))
    assert load_signal(p, "csv-2col").sample_rate_hz == pytest.approx(250.0)


def test_raw_zero(tmp_path):
    p = tmp_path / "z.bin"
    p.write_bytes(bytes(8))
    sig = load_signal(p, "raw-f64le", 100)
    np.testing.assert_array_equal(sig.samples, [0.0])


def test_raw_little_endian(tmp_path):
    p = tmp_path / "r.bin"
    p.write_bytes(struct.pack("<3d", 1.5, -2.0, 3.25))
    np.testing.assert_array_equal(load_signal(p, "raw-f64le", 1).samples, [1.5, -2.0, 3.25])


def test_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1.0\n2.0\nabc\n4.0\n")
    with pytest.raises(SignalFormatError, match=":3:"):
        load_signal(bad, "csv-1col", 100)
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(SignalFormatError, match="empty"):
        load_signal(empty, "csv-1col", 100)
    nonmono = tmp_path / "nm.csv"
    nonmono.write_text("0.0,1\n0.1,2\n0.05,3\n")
    with pytest.raises(SignalFormatError, match="increasing"):
        load_signal(nonmono, "csv-2col")
    with pytest.raises(SignalFormatError):
        load_signal(tmp_path / "missing.csv", "csv-1col", 100)
    odd = tmp_path / "odd.bin"
    odd.write_bytes(bytes(7))
    with pytest.raises(SignalFormatError):
        load_signal(odd, "raw-f64le", 100)
    with pytest.raises(ValueError):
        load_signal(bad, "wfdb", 100)


def test_signal_invariants():
    with pytest.raises(ValueError):
        Signal([1.0], 0)
    with pytest.raises(ValueError):
        Signal([1.0], float("inf"))
    assert Signal([1.0], 250).period == pytest.approx(0.004)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=1, max_size=50))
def test_csv_round_trip_exact(tmp_path_factory, values):
    p = tmp_path_factory.mktemp("rt") / "x.csv"
    write_signal(Signal(values, 500), p)
    back = load_signal(p, "csv-1col", 500)
    assert len(back) == len(values)
    np.testing.assert_array_equal(back.samples, np.array(values))


@pytest.mark.parametrize("fmt", ["csv-1col", "csv-2col", "raw-f64le"])
def test_round_trip_all_formats(tmp_path, fmt):
    x = np.random.default_rng(0).normal(size=100)
    p = tmp_path / "x"
    write_signal(Signal(x, 250), p, fmt)
    back = load_signal(p, fmt, 250)
    np.testing.assert_allclose(back.samples, x, rtol=0, atol=0)
    assert back.sample_rate_hz == pytest.approx(250)


def _report(peaks, rr=(), flags=()):
    return DiagnosisReport(
        intervals=IntervalSet(RR=np.array(rr)),
        amplitudes={"P": None, "Q": None, "R": None, "S": None, "T": None},
        flags=list(flags),
        peaks=PeakSet(peaks, 200.0),
        signal_label="rec",
        n_samples=1000,
        sample_rate_hz=200.0,
    )


def test_write_report_empty(tmp_path):
    p = tmp_path / "r.json"
    write_report(_report([]), p)
    data = json.loads(p.read_text())
    assert data["peaks"] == [] and data["flags"] == []
    assert set(data) == {"signal", "peaks", "intervals", "amplitudes", "flags"}
    assert set(data["signal"]) == {"label", "n_samples", "sample_rate_hz"}
    assert set(data["intervals"]) == {"PR_s", "QRS_s", "QT_s", "ST_s", "PP_s", "RR_s"}
    assert set(data["amplitudes"]) == {"P_mv", "Q_mv", "R_mv", "S_mv", "T_mv"}


def test_write_report_peak_and_rr(tmp_path):
    p = tmp_path / "r.json"
    flag = Flag("RR_s", 0.645, 0.8, "Tachycardia (Fast heart)", "below")
    write_report(_report([Peak("R", 100, 1.6, 0)], rr=[129 / 200], flags=[flag]), p)
    data = json.loads(p.read_text())
    assert data["peaks"] == [{"label": "R", "index": 100, "time_s": 0.5, "amplitude_mv": 1.6}]
    assert data["intervals"]["RR_s"] == [0.645]
    assert data["flags"] == [{"rule": "RR_s", "measured": 0.645, "bound": 0.8, "finding": "Tachycardia (Fast heart)"}]


def test_write_report_byte_stable(tmp_path):
    rep = _report([Peak("R", 7, 1.0 / 3.0, 0)], rr=[0.1 + 0.2])
    write_report(rep, tmp_path / "a.json")
    write_report(rep, tmp_path / "b.json")
    a = (tmp_path / "a.json").read_bytes()
    assert a == (tmp_path / "b.json").read_bytes()
    assert b"0.333333" in a and b"0.3," not in a


def test_write_report_unwritable(tmp_path):
    with pytest.raises(OSError):
        write_report(_report([]), tmp_path / "missing" / "r.json")
