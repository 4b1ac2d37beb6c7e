"""Lower bounds on the per-use rate of concatenated coding with length-n inner blocks.

Every bound has the form ``(1 - pe) R - log(2)/n`` for an inner code of rate
``R`` whose decoding error is at most ``pe``. The quantum bound uses
``pe = 2 exp(-n E(R))``, the classical one ``pe = exp(-n E(R))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._optimize import golden_max
from .capacities import DiscreteChannel, holevo_binary, holevo_general, max_mutual_information
from .errors import CqratesError, DomainError, RegimeError
from .exponents import ExponentFunction
from .spectral import GramEnsemble, binary_entropy

LOG2 = math.log(2.0)
R_GRID = 2000
R_MIN = 1e-6


@dataclass(frozen=True)
class BoundPoint:
    """One evaluated lower bound. ``nan`` marks fields a bound does not define."""

    n: int
    rate_lb: float
    r_star: float = math.nan
    s_star: float = math.nan
    exponent: float = math.nan
    pe_bound: float = math.nan

    @property
    def negative(self):
        return self.rate_lb < 0


@dataclass(frozen=True)
class BoundCurve:
    model: dict
    points: tuple
    failures: tuple = field(default_factory=tuple)

    @property
    def ns(self):
        return [p.n for p in self.points]

    @property
    def rates(self):
        return np.array([p.rate_lb for p in self.points])


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError(f"blocklength n={n} must be a positive integer")
    return int(n)


def _objective(rate, exponent, n, coefficient):
    pe = min(1.0, coefficient * math.exp(-n * exponent))
    return (1.0 - pe) * rate - LOG2 / n, pe


class RateOptimizer:
    """``max_R (1 - min(1, c e^{-nE(R)})) R - log2/n`` over ``R in (0, C]``.

    A fixed log-spaced grid is scanned first (the objective need not be
    concave at small ``n``), then the best bracket is refined by golden
    section. Exponent values are memoized so sweeps over ``n`` share work.
    """

    def __init__(self, exponent_fn, capacity, coefficient, grid=R_GRID):
        if capacity <= 0:
            raise DomainError("capacity must be positive for a rate bound")
        self.exponent_fn = exponent_fn
        self.capacity = float(capacity)
        self.coefficient = float(coefficient)
        lo = min(R_MIN, self.capacity / 10.0)
        self.grid = np.geomspace(lo, self.capacity, grid)
        self.grid[-1] = self.capacity
        self._grid_e = None

    def _grid_exponents(self):
        if self._grid_e is None:
            self._grid_e = np.array([self.exponent_fn(r) for r in self.grid])
        return self._grid_e

    def __call__(self, n, candidates=()):
        n = _check_n(n)
        e_grid = self._grid_exponents()
        vals = [_objective(r, e, n, self.coefficient)[0] for r, e in zip(self.grid, e_grid)]
        i = int(np.argmax(vals))
        lo = self.grid[max(i - 1, 0)]
        hi = self.grid[min(i + 1, len(self.grid) - 1)]

        def g(r):
            return _objective(r, self.exponent_fn(r), n, self.coefficient)[0]

        r_gold, _ = golden_max(g, lo, hi, tol=1e-13 * self.capacity)
        best_r, best_v = float(self.grid[i]), vals[i]
        for r in (r_gold, *candidates):
            if not 0.0 < r <= self.capacity:
                continue
            v = g(r)
            if v > best_v or (v == best_v and r < best_r):
                best_r, best_v = float(r), v
        pt = self.exponent_fn.point(best_r)
        value, pe = _objective(best_r, pt.exponent, n, self.coefficient)
        return BoundPoint(n, value, best_r, pt.s_star, pt.exponent, pe)


def _ensemble_capacity(e):
    if e.size == 2:
        return holevo_binary(abs(e.gram[0, 1]))
    return holevo_general(e)[0]


def thm1_optimizer(e, grid=R_GRID):
    return RateOptimizer(ExponentFunction.quantum(e), _ensemble_capacity(e), 2.0, grid)


def thm2_optimizer(ch, grid=R_GRID):
    cap, _ = max_mutual_information(ch)
    return RateOptimizer(ExponentFunction.classical(ch), cap, 1.0, grid)


def thm1_bound(e, n, grid=R_GRID):
    """Quantum rate bound with joint measurements on length-``n`` blocks."""
    return thm1_optimizer(e, grid)(n)


def thm2_bound(ch, n, grid=R_GRID):
    """Classical rate bound for a DMC with length-``n`` inner codes."""
    return thm2_optimizer(ch, grid)(n)


def _bpsk_check_energy(energy):
    if not 0.0 < energy < 1.0 / math.e:
        raise DomainError(f"energy {energy} outside (0, 1/e)")
    return math.log(1.0 / energy)


def _bpsk_r_star(energy, n, log_inv):
    ne = n * energy
    if ne <= 1.0 or ne * math.log(ne) <= 1.0:
        raise RegimeError(f"n*E={ne} too small for the rate formula")
    return energy * log_inv * (1.0 - math.sqrt(math.log(ne * math.log(ne)) / ne)) + energy


def cor1_bpsk_bound(energy, n):
    """Closed-form BPSK bound using an explicit Gallager parameter."""
    log_inv = _bpsk_check_energy(energy)
    n = _check_n(n)
    if n < log_inv / energy:
        raise RegimeError(f"n={n} below E^-1 log(1/E) = {log_inv / energy:.6g}")
    r = _bpsk_r_star(energy, n, log_inv)
    cap = holevo_binary(math.exp(-2.0 * energy))
    r_c = energy + energy * energy * log_inv
    if not r_c < r < cap:
        raise RegimeError(f"R*={r} outside ({r_c}, {cap})")
    s = (math.log(log_inv) - math.log(r - energy)) / log_inv - 1.0
    if not 0.0 <= s <= 1.0:
        raise RegimeError(f"s'={s} outside [0, 1]")
    g = math.exp(-2.0 * energy)
    big, small = (1.0 + g) / 2.0, -math.expm1(-2.0 * energy) / 2.0
    # log-sum-exp of the two powered eigenvalues
    a, b = (1.0 + s) * math.log(big), (1.0 + s) * math.log(small)
    e_tilde = -(a + math.log1p(math.exp(b - a))) - s * r
    value, pe = _objective(r, e_tilde, n, 2.0)
    return BoundPoint(n, value, r, s, e_tilde, pe)


def bpsk_simplified_bound(energy, n):
    """Leading terms of the BPSK bound, valid for ``L^2/E <= n <= E^-2``."""
    log_inv = _bpsk_check_energy(energy)
    n = _check_n(n)
    if not log_inv ** 2 / energy <= n <= energy ** -2:
        raise RegimeError(
            f"n={n} outside [{log_inv ** 2 / energy:.6g}, {energy ** -2:.6g}]")
    return _bpsk_r_star(energy, n, log_inv)


def _thm3_x(capacity, dispersion, n):
    if dispersion <= 0:
        raise DomainError("dispersion must be positive")
    if capacity <= 0:
        raise DomainError("capacity must be positive")
    n = _check_n(n)
    x = dispersion / (n * capacity * capacity)
    if not x < 1.0:
        raise RegimeError(f"V/(nC^2)={x} must be below 1")
    return n, x


def thm3_bound(capacity, dispersion, n):
    """Leading-order dispersion bound ``C (1 - sqrt(x log(1/x))) - log2/n``, ``x = V/(nC^2)``.

    The remainder term is dropped.
    """
    n, x = _thm3_x(capacity, dispersion, n)
    return capacity * (1.0 - math.sqrt(x * math.log(1.0 / x))) - LOG2 / n


def thm3_r_star(capacity, dispersion, n):
    """Inner-code rate ``C (1 - sqrt(x log((1/x) log(1/x))))``; ``nan`` where undefined."""
    n, x = _thm3_x(capacity, dispersion, n)
    arg = math.log(1.0 / x) / x
    if arg <= 1.0:
        return math.nan
    return capacity * (1.0 - math.sqrt(x * math.log(arg)))


def thm3_point(capacity, dispersion, n):
    """Dispersion bound as a ``BoundPoint``.

    ``exponent`` is the quadratic approximation at ``r_star`` and
    ``pe_bound`` the matching ``min(1, 2 e^{-nE})``.
    """
    value = thm3_bound(capacity, dispersion, n)
    r = thm3_r_star(capacity, dispersion, n)
    if math.isnan(r):
        return BoundPoint(int(n), value)
    e = (r - capacity) ** 2 / (2.0 * dispersion)
    return BoundPoint(int(n), value, r, math.nan, e, min(1.0, 2.0 * math.exp(-n * e)))


def thm3_required_n(capacity, dispersion, fraction):
    """Smallest real ``n`` at which the leading-order bound reaches ``fraction * C``."""
    if not 0.0 < fraction < 1.0:
        raise DomainError("fraction must lie in (0, 1)")
    target = fraction * capacity

    def f(logn):
        n = math.exp(logn)
        x = dispersion / (n * capacity * capacity)
        if x >= 1.0 / math.e:
            return -math.inf
        return capacity * (1.0 - math.sqrt(x * math.log(1.0 / x))) - LOG2 / n - target

    lo = math.log(math.e * dispersion / capacity ** 2) + 1e-12
    hi = lo + 1.0
    while f(hi) < 0:
        hi += 1.0
        if hi > 700:
            raise DomainError("fraction not reachable")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return math.exp(hi)


def equierror_capacity(m, pe):
    """Capacity of the m-ary equierror channel: ``log m - pe log(m-1) - H_B(pe)``."""
    _check_equierror(m, pe)
    tail = 0.0 if pe == 0 else pe * math.log(m - 1.0)
    return math.log(m) - tail - binary_entropy(pe)


def equierror_capacity_weak(m, pe):
    """Weaker form ``(1 - pe) log m - log 2``."""
    _check_equierror(m, pe)
    return (1.0 - pe) * math.log(m) - LOG2


def _check_equierror(m, pe):
    if not m >= 2:
        raise DomainError(f"message count m={m} must be at least 2")
    if not 0.0 <= pe <= 1.0:
        raise DomainError(f"pe={pe} outside [0, 1]")


def equierror_channel(m, pe):
    """Symmetric m x m channel: correct with ``1 - pe``, errors spread uniformly."""
    if int(m) != m:
        raise DomainError("m must be an integer")
    m = int(m)
    _check_equierror(m, pe)
    w = np.full((m, m), pe / (m - 1))
    np.fill_diagonal(w, 1.0 - pe)
    return DiscreteChannel(w)


@dataclass(frozen=True)
class ModelSpec:
    """Model for a sweep: one of binary, bpsk, dmc, dispersion, ensemble."""

    kind: str
    gamma: float | None = None
    energy: float | None = None
    channel: DiscreteChannel | None = None
    capacity: float | None = None
    dispersion: float | None = None
    ensemble: GramEnsemble | None = None

    def __post_init__(self):
        need = {
            "binary": ("gamma",),
            "bpsk": ("energy",),
            "dmc": ("channel",),
            "dispersion": ("capacity", "dispersion"),
            "ensemble": ("ensemble",),
        }
        if self.kind not in need:
            raise DomainError(f"unknown model kind {self.kind!r}")
        for name in need[self.kind]:
            if getattr(self, name) is None:
                raise DomainError(f"model {self.kind} needs {name}")

    def describe(self):
        d = {"kind": self.kind}
        for name in ("gamma", "energy", "capacity", "dispersion"):
            if getattr(self, name) is not None:
                d[name] = getattr(self, name)
        if self.channel is not None:
            d["channel"] = self.channel.to_json()
        if self.ensemble is not None:
            d["ensemble"] = self.ensemble.to_json()
        return d


BOUNDS = {
    "binary": ("thm1",),
    "ensemble": ("thm1",),
    "bpsk": ("cor1", "thm1", "simplified"),
    "dmc": ("thm2",),
    "dispersion": ("thm3",),
}


def _binary_ensemble(gamma):
    if not 0.0 <= gamma <= 1.0:
        raise DomainError(f"gamma={gamma} outside [0, 1]")
    return GramEnsemble([[1.0, gamma], [gamma, 1.0]])


def bound_evaluator(model, bound=None, grid=R_GRID):
    """Return ``(name, f)`` where ``f(n, candidates)`` yields a ``BoundPoint``."""
    name = bound or BOUNDS[model.kind][0]
    if name not in BOUNDS[model.kind]:
        raise DomainError(f"bound {name!r} not available for model {model.kind}")
    if name in ("thm1", "thm2"):
        if name == "thm2":
            opt = thm2_optimizer(model.channel, grid)
        elif model.kind == "ensemble":
            opt = thm1_optimizer(model.ensemble, grid)
        elif model.kind == "binary":
            opt = thm1_optimizer(_binary_ensemble(model.gamma), grid)
        else:
            g = math.exp(-2.0 * model.energy)
            opt = thm1_optimizer(_binary_ensemble(g), grid)
        return name, opt
    if name == "cor1":
        return name, lambda n, candidates=(): cor1_bpsk_bound(model.energy, n)
    if name == "simplified":
        return name, lambda n, candidates=(): BoundPoint(
            int(n), bpsk_simplified_bound(model.energy, n))
    return name, lambda n, candidates=(): thm3_point(model.capacity, model.dispersion, n)


def sweep(model, n_grid, bound=None, grid=R_GRID):
    """Evaluate a bound over an increasing blocklength grid.

    Per-point domain and regime errors are recorded in ``failures`` and do
    not stop the sweep. The optimal rate from the previous blocklength is
    offered as a candidate at the next one, which keeps the optimized bounds
    nondecreasing in ``n``.
    """
    ns = [_check_n(n) for n in n_grid]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("n grid must be strictly increasing")
    name, f = bound_evaluator(model, bound, grid)
    points, failures = [], []
    hints = []
    for n in ns:
        try:
            pt = f(n, tuple(hints))
        except CqratesError as exc:
            failures.append((n, str(exc)))
            continue
        points.append(pt)
        if not math.isnan(pt.r_star):
            hints = [pt.r_star]
    desc = model.describe()
    desc["bound"] = name
    return BoundCurve(desc, tuple(points), tuple(failures))


CSV_HEADER = "n,r_star,s_star,exponent,pe_bound,rate_lb_nats,pie_nats_per_photon"


def _fmt(x):
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(float(x))


def curve_rows(curve, energy=None):
    """CSV rows (strings) for a curve; failed blocklengths get empty fields."""
    by_n = {p.n: p for p in curve.points}
    ns = sorted(set(by_n) | {n for n, _ in curve.failures})
    rows = [CSV_HEADER]
    for n in ns:
        p = by_n.get(n)
        if p is None:
            rows.append(f"{n},,,,,,")
            continue
        pie = p.rate_lb / energy if energy else None
        fields = [str(n), _fmt(p.r_star), _fmt(p.s_star), _fmt(p.exponent),
                  _fmt(p.pe_bound), _fmt(p.rate_lb), _fmt(pie)]
        rows.append(",".join(fields))
    return rows


__all__ = [
    "BoundCurve",
    "BoundPoint",
    "CSV_HEADER",
    "ModelSpec",
    "RateOptimizer",
    "bound_evaluator",
    "bpsk_simplified_bound",
    "cor1_bpsk_bound",
    "curve_rows",
    "equierror_capacity",
    "equierror_capacity_weak",
    "equierror_channel",
    "sweep",
    "thm1_bound",
    "thm1_optimizer",
    "thm2_bound",
    "thm2_optimizer",
    "thm3_bound",
    "thm3_point",
    "thm3_r_star",
    "thm3_required_n",
]
