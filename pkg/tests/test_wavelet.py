import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrskit.signal_io import Signal
from qrskit.wavelet import (
    daubechies_filter,
    dump_coefficients,
    dwt_decompose,
    reconstruct_approximation,
    reconstruct_detail,
    waverec,
)


def analysis_matrices(h, g, n):
    """Brute-force periodic analysis: circular correlation, keep even offsets."""
    A_lo = np.zeros((n // 2, n))
    A_hi = np.zeros((n // 2, n))
    for col in range(n):
        e = np.zeros(n)
        e[col] = 1.0
        for filt, A in ((h, A_lo), (g, A_hi)):
            conv = np.zeros(n)
            for m in range(n):
                for j in range(len(filt)):
                    conv[m] += filt[j] * e[(m + j) % n]
            A[:, col] = conv[0::2]
    return A_lo, A_hi


def max_depth(n, L, even_only=False):
    depth, m = 0, n
    while m >= L and (m % 2 == 0 or not even_only):
        depth += 1
        m = (m + 1) // 2
    return depth


# --- filters -----------------------------------------------------------------


def test_haar():
    f = daubechies_filter(1)
    np.testing.assert_allclose(f.lowpass, [2**-0.5, 2**-0.5], atol=1e-15)
    np.testing.assert_allclose(f.highpass, [2**-0.5, -(2**-0.5)], atol=1e-15)


def test_db2_closed_form():
    s3, s2 = np.sqrt(3.0), np.sqrt(2.0)
    expected = np.array([1 + s3, 3 + s3, 3 - s3, 1 - s3]) / (4 * s2)
    np.testing.assert_allclose(daubechies_filter(2).lowpass, expected, atol=1e-14)


@pytest.mark.parametrize("order", range(1, 9))
def test_filter_invariants(order):
    f = daubechies_filter(order)
    h, g = f.lowpass, f.highpass
    assert h.shape == g.shape == (2 * order,)
    assert abs(h.sum() - np.sqrt(2)) < 1e-12
    assert abs(np.sum(h * h) - 1) < 1e-12
    for m in range(1, order):
        assert abs(np.dot(h[: -2 * m], h[2 * m:])) < 1e-10
    k = np.arange(2 * order)
    np.testing.assert_array_equal(g, (-1.0) ** k * h[::-1])


@pytest.mark.parametrize("order", range(1, 9))
def test_highpass_vanishing_moments(order):
    # N vanishing moments: sum_k k^m g[k] = 0 for m < N
    g = daubechies_filter(order).highpass
    k = np.arange(g.shape[0], dtype=float)
    for m in range(order):
        assert abs(np.sum(k**m * g)) < 1e-8 * max(1.0, k.max() ** m)


@pytest.mark.parametrize("order", range(1, 9))
def test_matches_pywavelets(order):
    pywt = pytest.importorskip("pywt")
    np.testing.assert_allclose(daubechies_filter(order).lowpass, pywt.Wavelet(f"db{order}").rec_lo, atol=1e-13)


def test_deterministic():
    a = daubechies_filter(6).lowpass.copy()
    b = daubechies_filter(6).lowpass.copy()
    assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("order", [0, 9, -1, 2.5, True])
def test_bad_order(order):
    with pytest.raises(ValueError):
        daubechies_filter(order)


# --- decomposition -----------------------------------------------------------


def test_constant_signal_has_zero_details():
    dec = dwt_decompose(np.full(64, 5.0), daubechies_filter(6), 3, "periodic")
    for d in dec.details:
        assert np.max(np.abs(d)) < 1e-12


def test_haar_detail_identity():
    x = np.random.default_rng(1).normal(size=40)
    dec = dwt_decompose(x, daubechies_filter(1), 1)
    np.testing.assert_allclose(dec.details[0], (x[0::2] - x[1::2]) / np.sqrt(2), atol=1e-14)


def test_impulse_matches_matrix_oracle():
    f = daubechies_filter(6)
    x = np.zeros(32)
    x[0] = 1.0
    dec = dwt_decompose(x, f, 2)
    A1_lo, A1_hi = analysis_matrices(f.lowpass, f.highpass, 32)
    A2_lo, A2_hi = analysis_matrices(f.lowpass, f.highpass, 16)
    np.testing.assert_allclose(dec.details[0], A1_hi @ x, atol=1e-14)
    np.testing.assert_allclose(dec.approximations[0], A1_lo @ x, atol=1e-14)
    np.testing.assert_allclose(dec.details[1], A2_hi @ A1_lo @ x, atol=1e-14)
    np.testing.assert_allclose(dec.approximations[1], A2_lo @ A1_lo @ x, atol=1e-14)


def test_reconstruct_detail_matches_synthesis_oracle():
    f = daubechies_filter(1)
    x = np.zeros(16)
    x[5] = 1.0
    dec = dwt_decompose(x, f, 1)
    A_lo, A_hi = analysis_matrices(f.lowpass, f.highpass, 16)
    # orthonormal analysis => synthesis is the transpose
    np.testing.assert_allclose(A_lo.T @ A_lo + A_hi.T @ A_hi, np.eye(16), atol=1e-14)
    np.testing.assert_allclose(reconstruct_detail(dec, 1).samples, A_hi.T @ (A_hi @ x), atol=1e-14)


def test_reconstruct_detail_db6_matches_oracle():
    f = daubechies_filter(6)
    x = np.random.default_rng(3).normal(size=64)
    dec = dwt_decompose(x, f, 2)
    A1_lo, A1_hi = analysis_matrices(f.lowpass, f.highpass, 64)
    A2_lo, A2_hi = analysis_matrices(f.lowpass, f.highpass, 32)
    d2 = A1_lo.T @ A2_hi.T @ A2_hi @ A1_lo @ x
    np.testing.assert_allclose(reconstruct_detail(dec, 2).samples, d2, atol=1e-12)


def test_lengths_periodic_and_symmetric():
    x = np.random.default_rng(0).normal(size=100)
    dec = dwt_decompose(x, daubechies_filter(2), 4, "periodic")
    assert [d.shape[0] for d in dec.details] == [50, 25, 13, 7]
    dec = dwt_decompose(x, daubechies_filter(2), 2, "symmetric")
    assert [d.shape[0] for d in dec.details] == [(100 + 4) // 2, (52 + 4) // 2]


@pytest.mark.parametrize("mode", ["periodic", "symmetric"])
@pytest.mark.parametrize("n", [64, 100, 257, 1000])
@pytest.mark.parametrize("order", range(1, 9))
def test_perfect_reconstruction(mode, n, order):
    x = np.random.default_rng(n * 10 + order).normal(size=n)
    f = daubechies_filter(order)
    dec = dwt_decompose(x, f, max_depth(n, f.length), mode)
    total = reconstruct_approximation(dec).samples + sum(
        reconstruct_detail(dec, k).samples for k in range(1, dec.levels + 1)
    )
    assert np.linalg.norm(total - x) / np.linalg.norm(x) < 1e-10
    assert np.linalg.norm(waverec(dec) - x) / np.linalg.norm(x) < 1e-10


@pytest.mark.parametrize("n", [64, 100, 256, 1000])
@pytest.mark.parametrize("order", range(1, 9))
def test_energy_conservation(n, order):
    x = np.random.default_rng(order).normal(size=n)
    f = daubechies_filter(order)
    dec = dwt_decompose(x, f, max_depth(n, f.length, even_only=True))
    energy = np.sum(dec.approximations[-1] ** 2) + sum(np.sum(d**2) for d in dec.details)
    assert abs(energy - np.sum(x**2)) / np.sum(x**2) < 1e-9


@settings(max_examples=30, deadline=None)
@given(
    alpha=st.floats(-5, 5),
    beta=st.floats(-5, 5),
    seed=st.integers(0, 2**31),
    order=st.integers(1, 8),
)
def test_linearity(alpha, beta, seed, order):
    rng = np.random.default_rng(seed)
    x, y = rng.normal(size=(2, 128))
    f = daubechies_filter(order)
    dx, dy, dxy = (dwt_decompose(s, f, 2) for s in (x, y, alpha * x + beta * y))
    for k in range(2):
        np.testing.assert_allclose(dxy.details[k], alpha * dx.details[k] + beta * dy.details[k], atol=1e-10)
        np.testing.assert_allclose(
            dxy.approximations[k], alpha * dx.approximations[k] + beta * dy.approximations[k], atol=1e-10
        )


def test_db4_annihilates_low_degree_polynomials():
    n = 256
    t = np.arange(n) / n
    f = daubechies_filter(4)
    for degree in range(1, 4):
        d1 = dwt_decompose(t**degree, f, 1).details[0]
        # coefficients whose support wraps around the period boundary are excluded
        interior = d1[: -f.length // 2]
        assert np.max(np.abs(interior)) < 1e-8


def test_zero_detail_reconstructs_to_zero():
    dec = dwt_decompose(np.zeros(128), daubechies_filter(3), 3)
    out = reconstruct_detail(dec, 2)
    assert len(out) == 128 and not np.any(out.samples)


def test_signal_input_keeps_rate():
    sig = Signal(np.random.default_rng(0).normal(size=256), 250.0)
    dec = dwt_decompose(sig, daubechies_filter(2), 2)
    assert reconstruct_detail(dec, 1).sample_rate_hz == 250.0


def test_errors():
    f = daubechies_filter(6)
    with pytest.raises(ValueError, match="too short"):
        dwt_decompose(np.zeros(64), f, 4)
    with pytest.raises(ValueError):
        dwt_decompose(np.zeros(64), f, 0)
    with pytest.raises(ValueError):
        dwt_decompose(np.zeros(64), f, 1, "zero")
    dec = dwt_decompose(np.zeros(64), f, 2)
    for level in (0, 3):
        with pytest.raises(ValueError):
            reconstruct_detail(dec, level)


def test_dump_coefficients(tmp_path):
    dec = dwt_decompose(np.arange(64.0), daubechies_filter(2), 2)
    dump_coefficients(dec, tmp_path)
    assert sorted(p.name for p in tmp_path.iterdir()) == ["a1.csv", "a2.csv", "d1.csv", "d2.csv"]
    back = np.loadtxt(tmp_path / "d2.csv")
    np.testing.assert_array_equal(back, dec.details[1])
