import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cqrates.capacities import DiscreteChannel, holevo_binary, holevo_general, max_mutual_information
from cqrates.errors import DomainError
from cqrates.exponents import (
    ExponentFunction,
    awgn_vc_ratio_lowsnr,
    classical_dispersion,
    classical_e0,
    classical_error_exponent,
    quadratic_exponent,
    quantum_dispersion,
    quantum_e0,
    quantum_error_exponent,
)
from cqrates.optical import coherent_overlap
from cqrates.spectral import GramEnsemble, Spectrum, binary_spectrum

BPSK_G = math.exp(-0.02)
BSC = DiscreteChannel.bsc(0.11)
NOISELESS = DiscreteChannel(np.eye(2))
S_GRID = np.linspace(0.0, 1.0, 10001)


def binary(g):
    return GramEnsemble([[1, g], [g, 1]])


def binary_e0_table(g, qs):
    """``-log Tr rho^(1+s)`` on an (s, q) grid from the closed-form eigenvalues."""
    v = 4 * qs * (1 - qs)
    r = np.sqrt((1 - 2 * qs) ** 2 + v * g * g)
    small = v * (1 - g * g) / (2 * (1 + r))
    big = 1 - small
    out = np.empty((S_GRID.size, qs.size))
    for i, s in enumerate(S_GRID):
        out[i] = -np.log(big ** (1 + s) + small ** (1 + s))
    return out


def bsc_e0_table(p, qs):
    w = np.array([[1 - p, p], [p, 1 - p]])
    out = np.empty((S_GRID.size, qs.size))
    for i, s in enumerate(S_GRID):
        a = w ** (1 / (1 + s))
        inner = np.outer(1 - qs, a[0]) + np.outer(qs, a[1])
        out[i] = -np.log(np.sum(inner ** (1 + s), axis=1))
    return out


# E0

def test_quantum_e0_equal_eigenvalues():
    for s in np.linspace(0, 1, 11):
        assert quantum_e0(Spectrum((0.5, 0.5)), s) == pytest.approx(s * math.log(2), abs=1e-15)


def test_quantum_e0_zero_at_s0():
    assert quantum_e0(binary_spectrum(0.3, 0.4), 0.0) == pytest.approx(0.0, abs=1e-16)


def test_quantum_e0_quarter():
    exact = -mpmath.log(mpmath.mpf("0.0625") + mpmath.mpf("0.5625"))
    assert quantum_e0(Spectrum((0.25, 0.75)), 1.0) == pytest.approx(float(exact), abs=1e-15)
    assert float(exact) == pytest.approx(0.470004, abs=5e-7)


def test_quantum_e0_tiny_eigenvalues_do_not_underflow():
    spec = binary_spectrum(0.5, 1 - 1e-300)
    assert quantum_e0(spec, 1.0) == pytest.approx(0.0, abs=1e-15)
    s = Spectrum((1 - 1e-200, 1e-200))
    assert math.isfinite(quantum_e0(s, 0.5))


def test_e0_domain():
    with pytest.raises(DomainError):
        quantum_e0(Spectrum((1.0,)), 1.5)
    with pytest.raises(DomainError):
        classical_e0([0.5, 0.5], BSC, -0.1)
    with pytest.raises(DomainError):
        classical_e0([1.0], BSC, 0.5)


def test_classical_e0_examples():
    for s in np.linspace(0, 1, 11):
        assert classical_e0([0.5, 0.5], NOISELESS, s) == pytest.approx(s * math.log(2), abs=1e-15)
        for q in (0.1, 0.5):
            assert classical_e0([q, 1 - q], DiscreteChannel.bsc(0.5), s) == pytest.approx(0, abs=1e-15)


def test_classical_e0_bsc_closed_form():
    p = mpmath.mpf("0.11")
    exact = -mpmath.log((mpmath.sqrt(1 - p) + mpmath.sqrt(p)) ** 2 / 2)
    assert classical_e0([0.5, 0.5], BSC, 1.0) == pytest.approx(float(exact), abs=1e-15)


def test_quantum_and_classical_e0_agree_on_orthogonal_states():
    for s in np.linspace(0, 1, 21):
        assert quantum_e0(Spectrum((0.5, 0.5)), s) == pytest.approx(
            classical_e0([0.5, 0.5], NOISELESS, s), abs=1e-15)


# quantum exponent

@pytest.mark.parametrize("rate", [0.05, 0.3, 0.6])
def test_orthogonal_pair_exponent(rate):
    pt = quantum_error_exponent(binary(0.0), rate)
    assert pt.exponent == pytest.approx(math.log(2) - rate, abs=1e-12)
    assert pt.s_star == pytest.approx(1.0)


def test_exponent_vanishes_at_capacity():
    c = holevo_binary(BPSK_G)
    pt = quantum_error_exponent(binary(BPSK_G), c)
    assert pt.exponent == pytest.approx(0.0, abs=1e-8)
    assert quantum_error_exponent(binary(BPSK_G), 1.01 * c).exponent == 0.0


def test_bpsk_exponent_against_dense_grid():
    qs = np.linspace(0.0, 1.0, 10001)
    table = binary_e0_table(BPSK_G, qs)
    rate = 0.03
    oracle = float(np.max(table.max(axis=1) - S_GRID * rate))
    pt = quantum_error_exponent(binary(BPSK_G), rate)
    assert oracle - 1e-14 <= pt.exponent <= oracle + 1e-9
    assert pt.prior_star == (0.5, 0.5)


def test_binary_optimal_prior_is_symmetric_at_every_s():
    qs = np.linspace(0.0, 1.0, 10001)
    for g in (0.2, BPSK_G, 0.9):
        table = binary_e0_table(g, qs)
        best_q = qs[np.argmax(table[1:], axis=1)]
        assert np.all(np.abs(best_q - 0.5) <= 1e-6)


def test_ternary_exponent_against_simplex_grid():
    amps = [0.0, 0.3, -0.3]
    gram = np.array([[coherent_overlap(a, b) for b in amps] for a in amps])
    e = GramEnsemble(gram)
    rate = 0.05
    pt = quantum_error_exponent(e, rate)
    # independent route: numpy eigensolves on a simplex grid, coarse s grid
    best = -math.inf
    for s in np.linspace(0, 1, 51):
        for i in range(0, 51):
            for j in range(0, 51 - i):
                p = np.array([i, j, 50 - i - j]) / 50
                sq = np.sqrt(p)
                w = np.linalg.eigvalsh(sq[:, None] * gram * sq[None, :])
                w = w[w > 1e-15]
                best = max(best, -math.log(np.sum(w ** (1 + s))) - s * rate)
    assert best - 1e-12 <= pt.exponent <= best + 2e-4
    assert abs(sum(pt.prior_star) - 1) < 1e-9


def test_quantum_exponent_monotone_and_convex():
    fn = ExponentFunction.quantum(binary(0.4))
    c = holevo_binary(0.4)
    rates = np.linspace(0, c, 200)
    es = np.array([fn(r) for r in rates])
    assert np.all(np.diff(es) <= 1e-12)
    assert np.all(np.diff(es, 2) >= -1e-9)


def test_quantum_exponent_positive_below_capacity():
    for g in (0.3, BPSK_G):
        c = holevo_binary(g)
        for frac in (0.5, 0.9, 0.99):
            assert quantum_error_exponent(binary(g), frac * c).exponent > 0


def test_quantum_exponent_rejects_negative_rate():
    with pytest.raises(DomainError):
        quantum_error_exponent(binary(0.5), -0.1)


# classical exponent

def test_classical_exponent_noiseless_and_capacity():
    assert classical_error_exponent(NOISELESS, math.log(2)).exponent == pytest.approx(0, abs=1e-12)
    c, _ = max_mutual_information(BSC)
    assert classical_error_exponent(BSC, c).exponent == pytest.approx(0.0, abs=1e-8)


def test_bsc_exponent_against_dense_grid():
    qs = np.linspace(0.0, 1.0, 10001)
    table = bsc_e0_table(0.11, qs)
    oracle = float(np.max(table.max(axis=1) - S_GRID * 0.2))
    pt = classical_error_exponent(BSC, 0.2)
    assert oracle - 1e-14 <= pt.exponent <= oracle + 1e-9


def test_asymmetric_channel_exponent_against_grid():
    ch = DiscreteChannel([[0.7, 0.2, 0.1], [0.1, 0.6, 0.3]])
    w = ch.transition
    qs = np.linspace(0, 1, 2001)
    best = -math.inf
    for s in np.linspace(0, 1, 1001):
        a = w ** (1 / (1 + s))
        inner = np.outer(1 - qs, a[0]) + np.outer(qs, a[1])
        best = max(best, float(np.max(-np.log(np.sum(inner ** (1 + s), axis=1)))) - s * 0.1)
    pt = classical_error_exponent(ch, 0.1)
    assert best - 1e-12 <= pt.exponent <= best + 1e-6


def test_classical_exponent_monotone_and_convex():
    fn = ExponentFunction.classical(BSC)
    c, _ = max_mutual_information(BSC)
    es = np.array([fn(r) for r in np.linspace(0, c, 200)])
    assert np.all(np.diff(es) <= 1e-12)
    assert np.all(np.diff(es, 2) >= -1e-9)
    assert all(fn(f * c) > 0 for f in (0.5, 0.99))


def test_exponent_function_memoizes():
    fn = ExponentFunction.classical(BSC)
    assert fn.point(0.1) is fn.point(0.1)


# dispersions

def test_quantum_dispersion_examples():
    assert quantum_dispersion(Spectrum((0.5, 0.5))) == pytest.approx(0.0, abs=1e-16)
    assert quantum_dispersion(Spectrum((1.0, 0.0))) == 0.0


def test_bpsk_dispersion_value_and_band():
    g = mpmath.exp(mpmath.mpf("-0.02"))
    sig = [(1 - g) / 2, (1 + g) / 2]
    mean = sum(x * mpmath.log(x) for x in sig)
    exact = sum(x * mpmath.log(x) ** 2 for x in sig) - mean ** 2
    v = quantum_dispersion(binary_spectrum(0.5, BPSK_G))
    assert v == pytest.approx(float(exact), rel=1e-12)
    band = 0.01 * math.log(100) ** 2
    assert abs(v / band - 1) < 0.05


def test_classical_dispersion_examples():
    assert classical_dispersion(DiscreteChannel.bsc(0.5)) == pytest.approx(0.0, abs=1e-20)
    assert classical_dispersion(NOISELESS) == pytest.approx(0.0, abs=1e-20)
    p = mpmath.mpf("0.11")
    exact = p * (1 - p) * mpmath.log((1 - p) / p) ** 2
    assert classical_dispersion(BSC) == pytest.approx(float(exact), rel=1e-10)


def test_classical_dispersion_with_unused_input():
    # third input is dominated and gets zero weight at capacity
    ch = DiscreteChannel([[0.9, 0.1], [0.1, 0.9], [0.5, 0.5]])
    v = classical_dispersion(ch)
    assert v == pytest.approx(classical_dispersion(DiscreteChannel.bsc(0.1)), rel=1e-6)


def test_quadratic_exponent():
    assert quadratic_exponent(0.0555, 0.2105, 0.0555) == 0.0
    assert quadratic_exponent(0.0555, 0.2105, 0.05) == pytest.approx(7.185e-5, rel=1e-3)
    with pytest.raises(DomainError):
        quadratic_exponent(1.0, 0.0, 0.5)


def test_awgn_ratio():
    assert awgn_vc_ratio_lowsnr(0.01) == 400.0
    assert awgn_vc_ratio_lowsnr(1.0) == 4.0
    assert awgn_vc_ratio_lowsnr(0.001) == 4000.0
    with pytest.raises(DomainError):
        awgn_vc_ratio_lowsnr(0.0)


@pytest.mark.parametrize("kind", ["quantum", "classical"])
def test_quadratic_limit_ratio_tends_to_one(kind):
    if kind == "quantum":
        c = holevo_binary(BPSK_G)
        v = quantum_dispersion(binary_spectrum(0.5, BPSK_G))
        fn = ExponentFunction.quantum(binary(BPSK_G))
    else:
        c, _ = max_mutual_information(BSC)
        v = classical_dispersion(BSC)
        fn = ExponentFunction.classical(BSC)
    ratios = [fn(c * (1 - d)) / quadratic_exponent(c, v, c * (1 - d))
              for d in (0.02, 0.01, 0.005, 0.002, 0.001)]
    assert all(0.9 <= r <= 1.1 for r in ratios)
    assert all(abs(b - 1) <= abs(a - 1) for a, b in zip(ratios, ratios[1:]))


@settings(max_examples=4)
@given(st.integers(3, 3), st.integers(0, 2**32 - 1))
def test_general_ensemble_e0_never_exceeds_entropy_slope(d, seed):
    # E0(s)/s is bounded by the Holevo capacity for every s in (0, 1]
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    z /= np.linalg.norm(z, axis=0)
    e = GramEnsemble(z.conj().T @ z)
    c, _ = holevo_general(e)
    pt = quantum_error_exponent(e, 0.0)
    assert pt.exponent <= c + 1e-8
