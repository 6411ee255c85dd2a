import numpy as np
import pytest

from qrskit.synth import SynthConfig, generate


def periodic_analysis_matrices(h, g, n):
    """Dense periodic analysis operators built from shifted copies of the filters."""
    def rows(f):
        base = np.zeros(n)
        for j, c in enumerate(f):
            base[j % n] += c
        return np.array([np.roll(base, 2 * k) for k in range(n // 2)])

    return rows(h), rows(g)


def detail_projection(h, g, n, levels, level):
    """Dense matrix mapping a signal to its level-``level`` detail on the original grid."""
    lo_chain = np.eye(n)
    m = n
    for _ in range(level - 1):
        A_lo, _ = periodic_analysis_matrices(h, g, m)
        lo_chain = A_lo @ lo_chain
        m //= 2
    _, A_hi = periodic_analysis_matrices(h, g, m)
    analysis = A_hi @ lo_chain
    return analysis.T @ analysis


def match_counts(found, truth, tol):
    found, truth = np.asarray(found), np.asarray(truth)
    tp = sum(1 for t in truth if found.size and np.min(np.abs(found - t)) <= tol)
    fp = sum(1 for f in found if np.min(np.abs(truth - f)) > tol)
    return tp, fp


@pytest.fixture(scope="session")
def ecg60():
    return generate(SynthConfig(n_beats=60, rr_s=0.8, sample_rate_hz=360.0))


@pytest.fixture(scope="session")
def ecg645():
    return generate(SynthConfig(n_beats=20, rr_s=0.645, sample_rate_hz=360.0))
