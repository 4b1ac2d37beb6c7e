"""Holevo capacity, binary accessible information, and DMC capacity.

All rates are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._optimize import simplex_ascent
from .errors import ConvergenceError, DomainError
from .spectral import (
    StateModel,
    binary_entropy,
    ensemble_spectrum,
    von_neumann_entropy,
)


@dataclass(frozen=True)
class DiscreteChannel:
    """Classical DMC; row ``x`` of ``transition`` is ``P(.|x)``."""

    transition: np.ndarray

    def __post_init__(self):
        w = np.array(self.transition, dtype=float)
        if w.ndim != 2 or min(w.shape) < 1:
            raise DomainError("transition must be a nonempty matrix")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise DomainError("transition entries must be nonnegative")
        if np.max(np.abs(w.sum(axis=1) - 1.0)) > 1e-12:
            raise DomainError("transition rows must sum to 1")
        w.setflags(write=False)
        object.__setattr__(self, "transition", w)

    @property
    def n_inputs(self):
        return self.transition.shape[0]

    @property
    def n_outputs(self):
        return self.transition.shape[1]

    @classmethod
    def bsc(cls, p):
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"crossover {p} outside [0, 1]")
        return cls([[1.0 - p, p], [p, 1.0 - p]])

    @classmethod
    def from_spec(cls, spec):
        """Parse a shorthand such as ``bsc:0.11``."""
        kind, _, arg = spec.partition(":")
        if kind == "bsc" and arg:
            return cls.bsc(float(arg))
        raise DomainError(f"unknown channel shorthand {spec!r}")

    @classmethod
    def from_json(cls, obj):
        return cls(obj["transition"])

    def to_json(self):
        return {"transition": self.transition.tolist()}

    def is_symmetric(self):
        """True when all rows are permutations of each other and so are all columns.

        For such channels the uniform input maximizes both the mutual
        information and Gallager's E0.
        """
        w = self.transition
        rows = np.sort(w, axis=1)
        cols = np.sort(w, axis=0)
        return bool(np.allclose(rows, rows[0], rtol=0, atol=1e-15)
                    and np.allclose(cols, cols[:, :1], rtol=0, atol=1e-15))


def holevo_binary(gamma):
    """Holevo capacity of two pure states with overlap magnitude ``gamma``."""
    if not 0.0 <= gamma <= 1.0:
        raise DomainError(f"gamma={gamma} outside [0, 1]")
    return binary_entropy((1.0 - gamma) / 2.0)


def c1_binary(gamma):
    """Single-copy accessible information of two pure states.

    Equivalent to ``log 2 - H_B(p_err)`` where ``p_err`` is the minimum error
    probability for equiprobable discrimination; the closed form is evaluated
    that way for accuracy near ``gamma = 0``.
    """
    if not 0.0 <= gamma <= 1.0:
        raise DomainError(f"gamma={gamma} outside [0, 1]")
    r = math.sqrt(1.0 - gamma * gamma)
    p_err = gamma * gamma / (2.0 * (1.0 + r))
    return math.log(2.0) - binary_entropy(p_err)


def holevo_general(e, tol=1e-10, max_iter=20000):
    """Maximize ``S(rho(P))`` over the prior.

    ``e.prior`` is ignored. The entropy is concave in the prior, so the
    projected-gradient stationary point is the global optimum.

    Returns
    -------
    (capacity, prior)
    """
    d = e.size
    if not 2 <= d <= 16:
        raise DomainError(f"alphabet size {d} outside [2, 16]")
    model = StateModel(e)

    def entropy(p):
        lam, _ = model.decompose(p)
        lam = lam[lam >= 1e-15]
        return -0.5 * float(np.sum(lam * np.log(lam)))

    def grad(p):
        lam, ov = model.decompose(p)
        logs = np.log(np.maximum(lam, 1e-300))
        return -((logs + 1.0) @ ov)

    try:
        p, _ = simplex_ascent(entropy, grad, np.full(d, 1.0 / d), tol=tol, max_iter=max_iter)
    except ConvergenceError as exc:
        p, val = exc.best
        raise ConvergenceError(str(exc), best=(val, p)) from None
    return von_neumann_entropy(ensemble_spectrum(e.with_prior(p / p.sum()))), p


def gaussian_holevo(energy):
    """Capacity of the pure-loss bosonic channel at mean photon number ``energy``."""
    if energy < 0:
        raise DomainError("energy must be nonnegative")
    if energy == 0:
        return 0.0
    return (1.0 + energy) * math.log1p(energy) - energy * math.log(energy)


def _check_prior(prior, n):
    p = np.asarray(prior, dtype=float).reshape(-1)
    if p.size != n:
        raise DomainError(f"prior has length {p.size}, channel has {n} inputs")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise DomainError("prior must be a probability vector")
    return p


def _divergences(w, q):
    """``D(W(.|x) || q)`` for every input row."""
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(w > 0, w * (np.log(w) - np.log(q)[None, :]), 0.0)
    return terms.sum(axis=1)


def mutual_information(prior, ch):
    p = _check_prior(prior, ch.n_inputs)
    q = p @ ch.transition
    # unused inputs may have infinite divergence; they carry no weight
    used = p > 0
    return max(float(p[used] @ _divergences(ch.transition[used], q)), 0.0)


def _ba_step(p, d, upper, mu):
    p = p * np.exp(mu * (d - upper))
    return p / p.sum()


def max_mutual_information(ch, tol=1e-10, max_iter=100_000, callback=None):
    """Blahut-Arimoto capacity of a DMC.

    Iterates until the Csiszar bracket ``max_x D_x - sum_x p_x D_x`` is below
    ``tol``. ``callback(iteration, lower, upper)`` is called every step.

    Returns
    -------
    (capacity, prior)
    """
    w = ch.transition
    nx, ny = w.shape
    if nx > 4096 or ny > 4096:
        raise DomainError("alphabet too large for Blahut-Arimoto")
    p = np.full(nx, 1.0 / nx)
    lower = 0.0
    # step exponent: mu = 1 is the classical update; larger values are kept
    # while they raise I, since nearly useless channels crawl otherwise
    mu = 1.0
    d = _divergences(w, p @ w)
    for it in range(max_iter):
        lower = max(float(p @ d), 0.0)
        upper = float(d.max())
        if callback is not None:
            callback(it, lower, upper)
        if upper - lower < tol:
            return lower, p
        nxt = _ba_step(p, d, upper, 1.0)
        d_nxt = _divergences(w, nxt @ w)
        if mu > 1.0:
            fast = _ba_step(p, d, upper, mu)
            d_fast = _divergences(w, fast @ w)
            if fast @ d_fast >= nxt @ d_nxt:
                nxt, d_nxt = fast, d_fast
                mu = min(2.0 * mu, 1e6)
            else:
                mu = max(1.0, mu / 4.0)
        else:
            mu = 2.0
        p, d = nxt, d_nxt
    raise ConvergenceError("Blahut-Arimoto hit its iteration cap", best=(lower, p))


def pie(rate, energy):
    """Photon information efficiency in nats per photon."""
    if energy <= 0:
        raise DomainError("energy must be positive")
    return rate / energy
