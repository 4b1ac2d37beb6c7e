"""Scalar and simplex optimizers used by the capacity and exponent code."""

import math

import numpy as np

from .errors import ConvergenceError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo, hi, tol=1e-12, max_iter=200):
    """Maximize a unimodal scalar function on ``[lo, hi]``.

    Both endpoints are evaluated as well, so a maximum sitting on the
    boundary is returned exactly. Ties resolve to the smaller abscissa.

    Returns
    -------
    (x, fx)
    """
    if hi < lo:
        raise ValueError("empty bracket")
    f_lo, f_hi = f(lo), f(hi)
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    candidates = [(lo, f_lo), (c, fc), (d, fd), (hi, f_hi)]
    best_x, best_f = candidates[0]
    for x, fx in candidates[1:]:
        if fx > best_f or (fx == best_f and x < best_x):
            best_x, best_f = x, fx
    return best_x, best_f


def project_simplex(v):
    """Euclidean projection of ``v`` onto the probability simplex."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def simplex_ascent(f, grad, p0, tol=1e-10, max_iter=20000):
    """Projected gradient ascent with Armijo backtracking on the simplex.

    Stops when the gradient mapping ``proj(p + g) - p`` has norm below
    ``tol``; for a concave objective that certifies a global maximizer.
    Also stops once accepted steps gain nothing beyond rounding level three
    times in a row, since the objective can no longer resolve progress.

    Returns
    -------
    (p, f(p))
    """
    p = project_simplex(p0)
    fp = f(p)
    step = 1.0
    stalled = 0
    for _ in range(max_iter):
        g = grad(p)
        if np.linalg.norm(project_simplex(p + g) - p) < tol:
            return p, fp
        step = min(step * 2.0, 1e6)
        while True:
            cand = project_simplex(p + step * g)
            fc = f(cand)
            if fc >= fp + 1e-4 * float(g @ (cand - p)):
                break
            step *= 0.5
            if step < 1e-16:
                # no ascent direction left at machine precision
                return p, fp
        gain = fc - fp
        stalled = stalled + 1 if gain <= 8e-16 * abs(fp) else 0
        p, fp = cand, fc
        if stalled >= 3:
            return p, fp
    raise ConvergenceError("projected gradient hit its iteration cap", best=(p, fp))
