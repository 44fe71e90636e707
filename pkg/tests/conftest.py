import numpy as np
import pytest

from lpsquare.torus import make_trig_poly


def random_poly(rng, lo, hi):
    """Random complex TrigPoly on ``[lo, hi]`` with standard normal coefficients."""
    w = hi - lo + 1
    return make_trig_poly((lo, hi), rng.standard_normal(w) + 1j * rng.standard_normal(w))


def direct_eval(freqs, coeffs, x):
    """``sum_m c_m exp(2 pi i m x)`` by explicit summation (no FFT)."""
    freqs = np.asarray(freqs)
    x = np.asarray(x, dtype=float)
    return np.exp(2j * np.pi * np.multiply.outer(x, freqs)) @ np.asarray(coeffs)


def direct_block_range(k):
    """Block frequencies by scanning integers against the interval definition."""
    if k == 0:
        return [0]
    a = abs(k)
    pos = [m for m in range(1, 2 ** a + 1) if 2 ** (a - 1) <= m <= 2 ** a - 1]
    return pos if k > 0 else sorted(-m for m in pos)


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
