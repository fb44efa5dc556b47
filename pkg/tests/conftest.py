"""Shared test helpers: independent oracles kept free of package internals."""

import numpy as np
import pytest


def finite_difference(f, point, rel_step=3e-6):
    """Central finite-difference gradient of a scalar function."""
    point = np.asarray(point, dtype=float)
    grad = np.empty(point.size)
    for i in range(point.size):
        h = rel_step * max(1.0, abs(point[i]))
        e = np.zeros(point.size)
        e[i] = h
        grad[i] = (f(point + e) - f(point - e)) / (2.0 * h)
    return grad


def trigamma_series(a, m=100_000):
    """Independent trigamma oracle: truncated series plus Euler-Maclaurin tail."""
    j = np.arange(m, dtype=float)
    tail = 1.0 / (a + m) + 0.5 / (a + m) ** 2
    return float(np.sum((a + j) ** -2.0) + tail)


def ar1_chain(rho, n, seed):
    """Stationary AR(1) chain with unit marginal variance."""
    rng = np.random.default_rng(seed)
    x = np.empty(n)
    x[0] = rng.standard_normal()
    innov = rng.standard_normal(n) * np.sqrt(1.0 - rho * rho)
    for t in range(1, n):
        x[t] = rho * x[t - 1] + innov[t]
    return x


@pytest.fixture
def rng():
    return np.random.default_rng(20230815)
