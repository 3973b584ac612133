import os
import sys

import numpy as np
import pytest

try:
    import cuetrunc  # noqa: F401
except ImportError:  # running from a source checkout without installing
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))


def gauss_legendre(f, a, b, panels=64, order=24):
    """Composite Gauss-Legendre quadrature; brute-force oracle for the
    special-function tests (independent of any series/fraction code path)."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        total += half * float(np.sum(weights * f(mid + half * nodes)))
    return total


@pytest.fixture
def quad():
    return gauss_legendre
