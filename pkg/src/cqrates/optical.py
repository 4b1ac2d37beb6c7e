"""Coherent-state constellations on the pure-loss bosonic channel.

Loss is folded into the mean photon number ``energy`` at the receiver, so a
constellation is just a set of complex amplitudes with a prior. Only the
magnitudes of pairwise overlaps matter for the binary closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._optimize import golden_max
from .capacities import c1_binary, holevo_binary
from .errors import ConvergenceError, DomainError
from .spectral import GramEnsemble, binary_entropy


def coherent_overlap(a, b):
    """Inner product ``<a|b>`` of two coherent states, phase included."""
    a, b = complex(a), complex(b)
    return complex(np.exp(-abs(a) ** 2 / 2 - abs(b) ** 2 / 2 + a.conjugate() * b))


@dataclass(frozen=True)
class CoherentConstellation:
    """Complex amplitudes, their prior and a mean photon number budget."""

    amplitudes: tuple
    prior: tuple
    energy_budget: float

    def __post_init__(self):
        amps = tuple(complex(a) for a in self.amplitudes)
        p = np.asarray(self.prior, dtype=float).reshape(-1)
        if len(amps) < 1 or p.size != len(amps):
            raise DomainError("amplitudes and prior must have equal nonzero length")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise DomainError("prior must be a probability vector")
        if not self.energy_budget >= 0:
            raise DomainError("energy budget must be nonnegative")
        used = float(np.dot(p, np.abs(np.array(amps)) ** 2))
        if used > self.energy_budget + 1e-12:
            raise DomainError(f"mean photon number {used} exceeds budget {self.energy_budget}")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "prior", tuple(float(x) for x in p))
        object.__setattr__(self, "energy_budget", float(self.energy_budget))

    @property
    def mean_photons(self):
        return float(np.dot(self.prior, np.abs(np.array(self.amplitudes)) ** 2))

    def gram(self):
        a = self.amplitudes
        return np.array([[coherent_overlap(x, y) for y in a] for x in a])

    def ensemble(self):
        return GramEnsemble(self.gram(), self.prior)

    @classmethod
    def from_json(cls, obj):
        re = list(obj["amplitudes_re"])
        im = list(obj.get("amplitudes_im", [0.0] * len(re)))
        if len(im) != len(re):
            raise DomainError("amplitudes_re and amplitudes_im differ in length")
        amps = tuple(complex(x, y) for x, y in zip(re, im))
        prior = obj.get("prior", [1.0 / len(amps)] * len(amps))
        return cls(amps, tuple(prior), float(obj["energy"]))

    def to_json(self):
        return {
            "amplitudes_re": [a.real for a in self.amplitudes],
            "amplitudes_im": [a.imag for a in self.amplitudes],
            "prior": list(self.prior),
            "energy": self.energy_budget,
        }


def bpsk_overlap(energy):
    if energy < 0:
        raise DomainError("energy must be nonnegative")
    return math.exp(-2.0 * energy)


def bpsk_ensemble(energy, q=0.5):
    """Two-state ensemble ``{|sqrt(E)>, |-sqrt(E)>}`` with weight ``q`` on the second."""
    if energy < 0:
        raise DomainError("energy must be nonnegative")
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q={q} outside [0, 1]")
    a = math.sqrt(energy)
    return CoherentConstellation((a, -a), (1.0 - q, q), energy).ensemble()


def c_bpsk(energy):
    """BPSK Holevo capacity: ``(exact, E log(1/E) + E)``."""
    exact = holevo_binary(bpsk_overlap(energy))
    return exact, _log_term(energy) + energy


def c1_bpsk(energy):
    """BPSK single-copy accessible information: ``(exact, 2E)``."""
    return c1_binary(bpsk_overlap(energy)), 2.0 * energy


def _log_term(energy):
    return 0.0 if energy == 0 else -energy * math.log(energy)


@dataclass(frozen=True)
class Lemma1Result:
    q_star: float
    alpha0: float
    alpha1: float
    c1_exact: float
    c1_asymptotic: float

    def to_json(self):
        return {
            "q_star": self.q_star,
            "alpha0": self.alpha0,
            "alpha1": self.alpha1,
            "c1_exact": self.c1_exact,
            "c1_asymptotic": self.c1_asymptotic,
        }


def binary_input_c1_objective(q, energy):
    """Accessible information of the best antipodal pair with prior weight ``q``.

    The pair sits at squared distance ``E/(q(1-q))``, which saturates the
    energy budget, and the Helstrom error probability ``p`` of equiprobable
    discrimination gives ``H_B(q) - H_B(p)``.
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"q={q} outside (0, 1)")
    v = q * (1.0 - q)
    x = v * math.exp(-energy / v)
    # (1 - sqrt(1 - 4x))/2 without cancellation
    p = 2.0 * x / (1.0 + math.sqrt(max(1.0 - 4.0 * x, 0.0)))
    return binary_entropy(q) - binary_entropy(p)


def q_star_asymptotic(energy):
    return energy / 2.0 * math.log(1.0 / energy)


def lemma1_optimal_binary(energy, tol=1e-12, max_iter=200):
    """Energy-constrained optimal binary input for single-symbol detection."""
    if not 0.0 < energy < 0.1:
        raise DomainError(f"energy {energy} outside the low-photon regime (0, 0.1)")
    lo, hi = math.log(10.0 * energy * energy), math.log(0.5)
    # on q <= 1/2 a step of 2*tol in log q moves q by at most tol
    t, val = golden_max(lambda u: binary_input_c1_objective(math.exp(u), energy),
                        lo, hi, tol=tol / 0.5, max_iter=max_iter)
    q = math.exp(t)
    if not math.isfinite(val):
        raise ConvergenceError("objective not finite at the optimizer")
    log_inv = math.log(1.0 / energy)
    return Lemma1Result(
        q_star=q,
        alpha0=math.sqrt(energy * q / (1.0 - q)),
        alpha1=-math.sqrt(energy * (1.0 - q) / q),
        c1_exact=val,
        c1_asymptotic=energy * log_inv - energy * math.log(log_inv),
    )


__all__ = [
    "CoherentConstellation",
    "Lemma1Result",
    "binary_input_c1_objective",
    "bpsk_ensemble",
    "bpsk_overlap",
    "c1_bpsk",
    "c_bpsk",
    "coherent_overlap",
    "lemma1_optimal_binary",
    "q_star_asymptotic",
]
