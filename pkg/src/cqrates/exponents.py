"""Random-coding error exponents and channel dispersions.

Quantum exponent for pure-state ensembles::

    E(R) = max_{0<=s<=1} [ max_P -log Tr rho(P)^(1+s) - s R ]

Classical exponent uses Gallager's E0 in place of ``-log Tr rho^(1+s)``.
Both are evaluated with an outer golden-section search over ``s`` and an
inner maximization over the prior. Sums of powers are done in log space
(max-shifted log-sum-exp) so that tiny eigenvalues or transition
probabilities do not underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._optimize import golden_max, simplex_ascent
from .capacities import DiscreteChannel, _check_prior, max_mutual_information
from .errors import ConvergenceError, DomainError, NumericalError
from .spectral import StateModel, ensemble_spectrum

S_TOL = 1e-12
E_FLOOR = 1e-15


@dataclass(frozen=True)
class ExponentPoint:
    rate: float
    exponent: float
    s_star: float
    prior_star: tuple


def _check_s(s):
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"Gallager parameter s={s} outside [0, 1]")


def _lse(x):
    m = float(np.max(x))
    return m + math.log(float(np.sum(np.exp(x - m))))


def quantum_e0(spectrum, s):
    """``-log sum_i sigma_i^(1+s)``."""
    _check_s(s)
    if s == 0.0:
        return 0.0
    return -_lse((1.0 + s) * np.log(spectrum.support()))


def classical_e0(prior, ch, s):
    """Gallager's ``E0(s, P) = -log sum_y [sum_x P(x) W(y|x)^(1/(1+s))]^(1+s)``."""
    _check_s(s)
    p = _check_prior(prior, ch.n_inputs)
    if s == 0.0:
        return 0.0
    return _classical_e0(p, ch.transition, s)


def _classical_e0(p, w, s, logw=None):
    with np.errstate(divide="ignore", invalid="ignore"):
        if logw is None:
            logw = np.log(w)
        z = np.log(p)[:, None] + logw / (1.0 + s)
        m = np.max(z, axis=0)
        live = np.isfinite(m)
        inner = m[live] + np.log(np.sum(np.exp(z[:, live] - m[live]), axis=0))
    return -_lse((1.0 + s) * inner)


class _QuantumInner:
    """``s -> max_P -log Tr rho(P)^(1+s)`` for a fixed ensemble."""

    def __init__(self, e):
        self.ensemble = e
        self.size = e.size
        if self.size == 2:
            # Tr rho^(1+s) depends on q only through q(1-q) and is convex,
            # so the symmetric prior is optimal for every s
            sym = ensemble_spectrum(e.with_prior([0.5, 0.5]))
            self._binary = np.log(sym.support())
        else:
            self._binary = None
            self._model = StateModel(e)
            self._warm = np.full(self.size, 1.0 / self.size)

    def __call__(self, s):
        if self._binary is not None:
            return -_lse((1.0 + s) * self._binary), (0.5, 0.5)
        model = self._model

        def f(p):
            lam, _ = model.decompose(p)
            lam = lam[lam >= 1e-15]
            return -_lse((1.0 + s) * np.log(lam)) + math.log(2.0)

        def grad(p):
            lam, ov = model.decompose(p)
            pos = lam >= 1e-15
            trace = 0.5 * float(np.sum(lam[pos] ** (1.0 + s)))
            powers = np.where(pos, np.maximum(lam, 1e-300) ** s, 0.0)
            return -(1.0 + s) * (powers @ ov) / trace

        p, val = _inner_ascent(f, grad, self._warm, self.size, 3)
        self._warm = p
        return val, tuple(p)


class _ClassicalInner:
    """``s -> max_P E0(s, P)`` for a fixed DMC."""

    def __init__(self, ch):
        self.w = ch.transition
        with np.errstate(divide="ignore"):
            self.logw = np.log(self.w)
        self.size = ch.n_inputs
        self.symmetric = ch.is_symmetric()
        self._warm = np.full(self.size, 1.0 / self.size)

    def __call__(self, s):
        w = self.w
        if self.symmetric:
            return _classical_e0(self._warm, w, s, self.logw), tuple(self._warm)
        a = w ** (1.0 / (1.0 + s))

        def f(p):
            return _classical_e0(p, w, s, self.logw)

        def grad(p):
            inner = p @ a
            total = float(np.sum(inner ** (1.0 + s)))
            return -(1.0 + s) * (a @ (inner ** s)) / total

        p, val = _inner_ascent(f, grad, self._warm, self.size, 3)
        self._warm = p
        return val, tuple(p)


def _inner_ascent(f, grad, warm, size, grid_max_size):
    try:
        p, val = simplex_ascent(f, grad, warm, tol=1e-10)
    except ConvergenceError:
        if size > grid_max_size:
            raise
        p, val = _simplex_grid_max(f, size, 512)
    return p, val


def _simplex_grid_max(f, size, resolution):
    best_p, best_v = None, -math.inf
    if size == 2:
        pts = ((i / resolution, 1 - i / resolution) for i in range(resolution + 1))
    else:
        pts = ((i / resolution, j / resolution, 1 - (i + j) / resolution)
               for i in range(resolution + 1) for j in range(resolution + 1 - i))
    for pt in pts:
        p = np.array(pt)
        v = f(p)
        if v > best_v:
            best_p, best_v = p, v
    return best_p, best_v


def _exponent(inner, rate):
    if rate < 0:
        raise DomainError("rate must be nonnegative")
    cache = {}

    def objective(s):
        if s == 0.0:
            # E0(0) = 0 exactly; only the prior is needed
            val, prior = 0.0, inner(s)[1]
            cache[s] = prior
            return 0.0
        val, prior = inner(s)
        cache[s] = prior
        return val - s * rate

    s_star, value = golden_max(objective, 0.0, 1.0, tol=S_TOL)
    if value <= E_FLOOR:
        # at or above capacity the maximum sits at s = 0 where E0 = 0;
        # anything left is rounding in E0 at tiny s
        s_star, value = 0.0, 0.0
    prior = cache[s_star] if s_star in cache else inner(s_star)[1]
    return ExponentPoint(float(rate), float(value), float(s_star), tuple(float(x) for x in prior))


def quantum_error_exponent(e, rate):
    """Random-coding exponent of a pure-state ensemble (prior is optimized)."""
    return _exponent(_QuantumInner(e), rate)


def classical_error_exponent(ch, rate):
    """Gallager random-coding exponent of a DMC."""
    return _exponent(_ClassicalInner(ch), rate)


class ExponentFunction:
    """Reusable ``R -> ExponentPoint`` with memoization.

    Sweeps over the blocklength evaluate the exponent at the same rates many
    times; the inner prior optimizer also keeps its warm start between calls.
    """

    def __init__(self, inner):
        self._inner = inner
        self._cache = {}

    @classmethod
    def quantum(cls, e):
        return cls(_QuantumInner(e))

    @classmethod
    def classical(cls, ch):
        return cls(_ClassicalInner(ch))

    def point(self, rate):
        rate = float(rate)
        pt = self._cache.get(rate)
        if pt is None:
            pt = self._cache[rate] = _exponent(self._inner, rate)
        return pt

    def __call__(self, rate):
        return self.point(rate).exponent


def quantum_dispersion(spectrum):
    """Variance of ``-log sigma`` under the eigenvalue distribution."""
    sig = spectrum.support()
    logs = np.log(sig)
    mean = float(np.sum(sig * logs))
    return max(float(np.sum(sig * (logs - mean) ** 2)), 0.0)


def classical_dispersion(ch, tol=1e-12):
    """Variance of the information density at the capacity-achieving input."""
    _, prior = max_mutual_information(ch, tol=tol)
    prior = np.where(prior < 1e-12, 0.0, prior)
    prior /= prior.sum()
    w = ch.transition
    q = prior @ w
    joint = prior[:, None] * w
    mask = joint > 0
    if np.any(q[np.any(mask, axis=0)] <= 0):
        raise NumericalError("output distribution degenerate at the optimizing prior")
    dens = np.zeros_like(w)
    qq = np.broadcast_to(q, w.shape)
    dens[mask] = np.log(w[mask] / qq[mask])
    mean = float(np.sum(joint[mask] * dens[mask]))
    return max(float(np.sum(joint[mask] * (dens[mask] - mean) ** 2)), 0.0)


def quadratic_exponent(capacity, dispersion, rate):
    """``(R - C)^2 / (2V)``, the near-capacity approximation of E(R)."""
    if dispersion <= 0:
        raise DomainError("dispersion must be positive")
    return (rate - capacity) ** 2 / (2.0 * dispersion)


def awgn_vc_ratio_lowsnr(snr):
    """Low-SNR asymptote of ``V/C^2`` for the AWGN channel: ``4/SNR``."""
    if snr <= 0:
        raise DomainError("snr must be positive")
    return 4.0 / snr


__all__ = [
    "DiscreteChannel",
    "ExponentFunction",
    "ExponentPoint",
    "awgn_vc_ratio_lowsnr",
    "classical_dispersion",
    "classical_e0",
    "classical_error_exponent",
    "quadratic_exponent",
    "quantum_dispersion",
    "quantum_e0",
    "quantum_error_exponent",
]
