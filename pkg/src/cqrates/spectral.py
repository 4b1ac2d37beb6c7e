"""Density-operator spectra and entropies for pure-state ensembles.

A pure-state alphabet is carried around as its Gram matrix of pairwise
inner products. The nonzero eigenvalues of ``rho = sum_x p_x |psi_x><psi_x|``
coincide with those of the weighted Gram matrix ``D^1/2 G D^1/2`` with
``D = diag(p)``, so no explicit state vectors are ever needed for spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError

MAX_DIM = 64
ZERO_EIGENVALUE = 1e-15


def _readonly(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GramEnsemble:
    """Pure-state alphabet given by its Gram matrix, plus an input prior.

    ``prior`` defaults to uniform. The Gram matrix is symmetrized as
    ``(G + G^H)/2`` and its diagonal pinned to exactly 1 after validation.
    """

    gram: np.ndarray
    prior: np.ndarray | None = None

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=complex)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 1:
            raise DomainError("gram must be a square matrix")
        d = g.shape[0]
        if d > MAX_DIM:
            raise DomainError(f"alphabet size {d} exceeds {MAX_DIM}")
        scale = max(1.0, float(np.max(np.abs(g))))
        if np.max(np.abs(g - g.conj().T)) > 1e-10 * scale:
            raise DomainError("gram matrix is not Hermitian")
        g = (g + g.conj().T) / 2
        if np.max(np.abs(np.diag(g) - 1.0)) > 1e-12:
            raise DomainError("gram diagonal must be 1 (normalized states)")
        np.fill_diagonal(g, 1.0)
        if np.max(np.abs(g)) > 1.0 + 1e-12:
            raise DomainError("gram entries must have magnitude <= 1")
        if d > 1 and hermitian_eigenvalues(g)[-1] < -1e-10:
            raise DomainError("gram matrix is not positive semidefinite")

        if self.prior is None:
            p = np.full(d, 1.0 / d)
        else:
            p = np.asarray(self.prior, dtype=float).reshape(-1)
        _check_prior(p, d)
        object.__setattr__(self, "gram", _readonly(g))
        object.__setattr__(self, "prior", _readonly(p))

    @property
    def size(self):
        return self.gram.shape[0]

    def with_prior(self, prior):
        return GramEnsemble(self.gram, prior)

    @classmethod
    def from_json(cls, obj):
        re = np.asarray(obj["gram_re"], dtype=float)
        im = np.asarray(obj.get("gram_im", np.zeros_like(re)), dtype=float)
        return cls(re + 1j * im, obj.get("prior"))

    def to_json(self):
        return {
            "prior": self.prior.tolist(),
            "gram_re": self.gram.real.tolist(),
            "gram_im": self.gram.imag.tolist(),
        }


def _check_prior(p, d):
    if p.shape != (d,):
        raise DomainError(f"prior has length {p.size}, expected {d}")
    if np.any(p < 0) or abs(math.fsum(p) - 1.0) > 1e-12:
        raise DomainError("prior must be a probability vector")


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue distribution of a density operator, nonincreasing."""

    eigenvalues: tuple

    def __post_init__(self):
        w = [float(x) for x in self.eigenvalues]
        if not w:
            raise DomainError("empty spectrum")
        if min(w) < -1e-12:
            raise DomainError("spectrum has a negative eigenvalue")
        if abs(math.fsum(w) - 1.0) > 1e-10:
            raise DomainError("spectrum does not sum to 1")
        w = sorted((max(x, 0.0) for x in w), reverse=True)
        object.__setattr__(self, "eigenvalues", tuple(w))

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        return iter(self.eigenvalues)

    def support(self):
        """Eigenvalues treated as nonzero in entropy and exponent sums."""
        return np.array([x for x in self.eigenvalues if x >= ZERO_EIGENVALUE])


def binary_spectrum(q, gamma):
    """Eigenvalues of ``(1-q)|psi0><psi0| + q|psi1><psi1|`` with ``|<psi0|psi1>| = gamma``.

    The radicand is evaluated as ``(1-2q)^2 + 4q(1-q)gamma^2`` and the small
    eigenvalue as ``2q(1-q)(1-gamma^2)/(1+r)``, algebraically equal forms
    that avoid cancellation.
    """
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q={q} outside [0, 1]")
    if not 0.0 <= gamma <= 1.0:
        raise DomainError(f"gamma={gamma} outside [0, 1]")
    v = 4.0 * q * (1.0 - q)
    a = v * (1.0 - gamma) * (1.0 + gamma)
    r = math.sqrt((1.0 - 2.0 * q) ** 2 + v * gamma * gamma)
    small = a / (2.0 * (1.0 + r))
    return Spectrum((1.0 - small, small))


def _jacobi(a, want_vectors=False, max_sweeps=100):
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Returns the diagonal after convergence and, optionally, the accumulated
    rotation (columns are eigenvectors).
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n) if want_vectors else None
    norm = np.linalg.norm(a)
    target = 1e-13 * norm
    for _ in range(max_sweeps):
        off = _off_norm(a)
        if off <= target:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                g = 100.0 * abs(apq)
                if abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    # below the rounding level of both diagonal entries
                    a[p, q] = a[q, p] = 0.0
                    continue
                tau = (aqq - app) / (2.0 * apq)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                if v is not None:
                    vp, vq = v[:, p].copy(), v[:, q].copy()
                    v[:, p] = c * vp - s * vq
                    v[:, q] = s * vp + c * vq
    off = _off_norm(a)
    if off > 1e-12 * norm:
        raise NumericalError(f"Jacobi did not converge (off-diagonal norm {off:.3e})")
    return np.diag(a).copy(), v


def _off_norm(a):
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _real_embedding(m):
    return np.block([[m.real, -m.imag], [m.imag, m.real]])


def _as_hermitian(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError("expected a square matrix")
    if m.shape[0] > MAX_DIM:
        raise DomainError(f"dimension {m.shape[0]} exceeds {MAX_DIM}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if m.size and np.max(np.abs(m - m.conj().T)) > 1e-10 * scale:
        raise DomainError("matrix is not Hermitian")
    return (m + m.conj().T) / 2


def hermitian_eigenvalues(m):
    """All eigenvalues of a Hermitian matrix, nonincreasing.

    The matrix is embedded as the real symmetric ``[[A, -B], [B, A]]`` with
    ``m = A + iB``; every eigenvalue of ``m`` shows up twice there and the
    pairs are merged.
    """
    m = _as_hermitian(m)
    w, _ = _jacobi(_real_embedding(m))
    w = np.sort(w)[::-1]
    tol = 1e-9 * max(1.0, float(np.linalg.norm(m)))
    if np.any(np.abs(w[0::2] - w[1::2]) > tol):
        raise NumericalError("eigenvalue pairs of the real embedding do not match")
    return (w[0::2] + w[1::2]) / 2


def ensemble_spectrum(e):
    """Spectrum of the ensemble density operator."""
    sq = np.sqrt(e.prior)
    k = sq[:, None] * e.gram * sq[None, :]
    w = hermitian_eigenvalues(k)
    w = np.where((w < 0) & (w > -1e-10), 0.0, w)
    return Spectrum(tuple(w))


def von_neumann_entropy(s):
    """``-sum sigma log sigma`` in nats, with ``0 log 0 = 0``."""
    return -math.fsum(x * math.log(x) for x in s.eigenvalues if x >= ZERO_EIGENVALUE)


def binary_entropy(p):
    """Binary entropy in nats."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log1p(-p)


class StateModel:
    """Explicit state vectors reconstructed from a Gram matrix.

    Used by the prior optimizers, which need ``<psi_x| f(rho) |psi_x>`` for
    gradients. Column ``x`` of ``vectors`` is ``|psi_x>`` in the span of the
    alphabet, obtained from ``G = U diag(lam) U^H`` as ``diag(sqrt(lam)) U^H``.
    """

    def __init__(self, e):
        self.size = e.size
        lam, u = _eigh(e.gram)
        lam = np.clip(lam, 0.0, None)
        psi = np.sqrt(lam)[:, None] * u.conj().T
        self.vectors = psi
        # real embeddings of each |psi_x>, one per column
        self._embedded = np.vstack([psi.real, psi.imag])
        self._basis = np.eye(2 * self.size)
        self._last = None

    def decompose(self, prior):
        """Spectrum of ``rho(prior)`` in the real embedding plus overlaps.

        Returns ``(lam, ov)`` where ``lam`` holds every eigenvalue twice and
        ``ov[k, x]`` is the squared projection of embedded ``psi_x`` on the
        ``k``-th embedded eigenvector, so that
        ``<psi_x| f(rho) |psi_x> = sum_k f(lam_k) ov[k, x]``.

        Optimizers call this at slowly moving priors, so the Jacobi sweeps
        start from the previous eigenbasis, where the matrix is already
        nearly diagonal.
        """
        prior = np.asarray(prior, dtype=float)
        key = prior.tobytes()
        if self._last is not None and self._last[0] == key:
            return self._last[1]
        rho = (self.vectors * prior[None, :]) @ self.vectors.conj().T
        rho = (rho + rho.conj().T) / 2
        emb = _real_embedding(rho)
        basis = self._basis
        rotated = basis.T @ emb @ basis
        lam, w = _jacobi((rotated + rotated.T) / 2, want_vectors=True)
        vecs = basis @ w
        self._basis = vecs
        lam = np.clip(lam, 0.0, None)
        ov = (vecs.T @ self._embedded) ** 2
        self._last = (key, (lam, ov))
        return lam, ov


def _eigh(m):
    """Eigenpairs of a Hermitian matrix through the real embedding."""
    m = _as_hermitian(m)
    d = m.shape[0]
    w, v = _jacobi(_real_embedding(m), want_vectors=True)
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]
    # each eigenvalue is doubled; a Gram-Schmidt pass picks d independent
    # complex vectors a + ib out of the 2d real eigenvectors
    vals, vecs = [], []
    for k in range(2 * d):
        z = v[:d, k] + 1j * v[d:, k]
        for u in vecs:
            z = z - (u.conj() @ z) * u
        nz = np.linalg.norm(z)
        if nz > 1e-6:
            vecs.append(z / nz)
            vals.append(w[k])
        if len(vecs) == d:
            break
    if len(vecs) != d:
        raise NumericalError("could not recover a complex eigenbasis")
    return np.array(vals), np.column_stack(vecs)
