import math

import mpmath
import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

mpmath.mp.dps = 40

# (label, passed, detail) for each acceptance criterion, filled by test_acceptance
ACCEPTANCE = []


@pytest.fixture
def record():
    def _record(label, passed, detail):
        ACCEPTANCE.append((label, bool(passed), detail))
        print(f"{'PASS' if passed else 'FAIL'} {label}: {detail}")
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {label}: {detail}")


def mp_hb(p):
    p = mpmath.mpf(p)
    if p in (0, 1):
        return mpmath.mpf(0)
    return -p * mpmath.log(p) - (1 - p) * mpmath.log(1 - p)


def random_gram(rng, d, complex_=True):
    """Gram matrix of ``d`` random unit vectors in C^d."""
    z = rng.normal(size=(d, d))
    if complex_:
        z = z + 1j * rng.normal(size=(d, d))
    z /= np.linalg.norm(z, axis=0)
    g = z.conj().T @ z
    np.fill_diagonal(g, 1.0)
    return g


def close(a, b, tol):
    return math.isclose(float(a), float(b), rel_tol=0, abs_tol=tol)
