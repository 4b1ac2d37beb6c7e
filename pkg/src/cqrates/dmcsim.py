"""Inner codes over a DMC, the superchannels they induce, and brute-force C_n.

An inner code of ``m`` codewords and length ``n`` together with a hard
decision decoder turns ``n`` uses of a DMC into one use of an ``m``-ary
superchannel. The decoder here is MAP under a uniform message prior, which
minimizes the uniform-prior error probability; ties go to the lowest message
index. ``brute_force_cn`` instead searches every deterministic decoder,
since MAP does not necessarily maximize the superchannel mutual information.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .bounds import equierror_capacity
from .capacities import DiscreteChannel, _check_prior, max_mutual_information
from .errors import ConvergenceError, DomainError, FeasibilityError
from .exponents import classical_error_exponent

EXACT_LIMIT = 10**6
BRUTE_LIMIT = 10**7
MC_BLOCK = 8192


def _generator(seed, *key):
    if isinstance(seed, np.random.SeedSequence):
        seq = np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key + key)
    else:
        seq = np.random.SeedSequence(seed, spawn_key=key)
    return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True)
class InnerCode:
    """``m`` codewords of length ``n``, one per row."""

    codewords: np.ndarray

    def __post_init__(self):
        c = np.array(self.codewords)
        if c.ndim != 2 or c.shape[1] < 1:
            raise DomainError("codewords must be an m x n matrix")
        if c.shape[0] < 2:
            raise DomainError("an inner code needs at least 2 codewords")
        if not np.issubdtype(c.dtype, np.integer):
            if not np.all(c == np.round(c)):
                raise DomainError("codeword symbols must be integers")
            c = c.astype(np.int64)
        if np.any(c < 0):
            raise DomainError("codeword symbols must be nonnegative")
        c.setflags(write=False)
        object.__setattr__(self, "codewords", c)

    @property
    def m(self):
        return self.codewords.shape[0]

    @property
    def n(self):
        return self.codewords.shape[1]

    @property
    def effective_rate(self):
        return math.log(self.m) / self.n

    def check_alphabet(self, ch):
        if int(self.codewords.max()) >= ch.n_inputs:
            raise DomainError("codeword symbol outside the channel input alphabet")

    def permuted(self, order):
        return InnerCode(self.codewords[np.asarray(order)])


def repetition_code(n, m=2):
    """Codeword ``j`` repeats symbol ``j`` ``n`` times."""
    if n < 1 or m < 2:
        raise DomainError("need n >= 1 and m >= 2")
    return InnerCode(np.repeat(np.arange(m)[:, None], n, axis=1))


def random_inner_code(prior, n, m, seed):
    """i.i.d. codeword symbols drawn from ``prior``; deterministic given ``seed``."""
    p = np.asarray(prior, dtype=float).reshape(-1)
    p = _check_prior(p, p.size)
    if n < 1 or m < 2:
        raise DomainError("need n >= 1 and m >= 2")
    if n * m > EXACT_LIMIT:
        raise FeasibilityError(f"code size n*m={n * m} exceeds {EXACT_LIMIT}")
    rng = _generator(seed)
    return InnerCode(rng.choice(p.size, size=(m, n), p=p))


@dataclass(frozen=True)
class Superchannel:
    """m x m transition matrix from sent to decoded message, with its uniform-prior error."""

    channel: DiscreteChannel
    pe_uniform: float

    def __post_init__(self):
        w = self.channel.transition
        if w.shape[0] != w.shape[1]:
            raise DomainError("superchannel must be square")
        if abs(_pe_from_matrix(w) - self.pe_uniform) > 1e-12:
            raise DomainError("pe_uniform inconsistent with the transition matrix")

    @property
    def m(self):
        return self.channel.n_inputs


def _pe_from_matrix(w):
    m = w.shape[0]
    off = math.fsum(w[j, k] for j in range(m) for k in range(m) if k != j)
    return off / m


def _make_superchannel(counts):
    w = counts / counts.sum(axis=1, keepdims=True)
    return Superchannel(DiscreteChannel(w), _pe_from_matrix(w))


def _log_channel(ch):
    with np.errstate(divide="ignore"):
        return np.log(ch.transition)


def _all_outputs(n_out, n):
    """Every output sequence, row-major in lexicographic order."""
    idx = np.arange(n_out ** n)
    digits = np.empty((idx.size, n), dtype=np.int64)
    for t in range(n - 1, -1, -1):
        digits[:, t] = idx % n_out
        idx //= n_out
    return digits


def _loglik(codewords, logw, ys):
    """``ll[b, j] = sum_t log W(y_bt | c_jt)``, accumulated position by position."""
    ll = np.zeros((ys.shape[0], codewords.shape[0]))
    for t in range(codewords.shape[1]):
        ll += logw[codewords[:, t][None, :], ys[:, t][:, None]]
    return ll


def superchannel_exact(code, ch):
    """Exact superchannel by enumerating every output sequence."""
    code.check_alphabet(ch)
    total = ch.n_outputs ** code.n
    if total > EXACT_LIMIT:
        raise FeasibilityError(f"|Y|^n = {total} exceeds {EXACT_LIMIT}")
    ys = _all_outputs(ch.n_outputs, code.n)
    ll = _loglik(code.codewords, _log_channel(ch), ys)
    decision = np.argmax(ll, axis=1)
    probs = np.exp(ll)
    counts = np.stack([np.bincount(decision, weights=probs[:, j], minlength=code.m)
                       for j in range(code.m)])
    return _make_superchannel(counts)


def _mc_block(code, cdf, logw, size, rng):
    msgs = rng.integers(code.m, size=size)
    sent = code.codewords[msgs]
    u = rng.random(sent.shape)
    ys = np.minimum((u[..., None] >= cdf[sent]).sum(axis=-1), cdf.shape[1] - 1)
    decision = np.argmax(_loglik(code.codewords, logw, ys), axis=1)
    return msgs, decision


def superchannel_mc(code, ch, trials, seed, return_counts=False):
    """Monte-Carlo estimate of ``pe_uniform`` with a 95% normal half-width.

    Trials run in fixed blocks of 8192, block ``b`` drawing from the
    substream ``(seed, b)``, so results do not depend on evaluation order.
    """
    if trials < 100:
        raise DomainError("need at least 100 trials")
    code.check_alphabet(ch)
    cdf = np.cumsum(ch.transition, axis=1)
    logw = _log_channel(ch)
    counts = np.zeros((code.m, code.m), dtype=np.int64)
    for b, start in enumerate(range(0, trials, MC_BLOCK)):
        size = min(MC_BLOCK, trials - start)
        msgs, decision = _mc_block(code, cdf, logw, size, _generator(seed, b))
        np.add.at(counts, (msgs, decision), 1)
    errors = int(counts.sum() - np.trace(counts))
    p = errors / trials
    half = 1.96 * math.sqrt(p * (1.0 - p) / trials)
    if return_counts:
        return p, half, counts
    return p, half


def empirical_superchannel(counts):
    """Superchannel from Monte-Carlo confusion counts; unseen messages get a unit row."""
    c = np.array(counts, dtype=float)
    for j in np.nonzero(c.sum(axis=1) == 0)[0]:
        c[j, j] = 1.0
    return _make_superchannel(c)


@dataclass(frozen=True)
class Lemma2Result:
    lhs: float
    rhs: float
    holds: bool

    def to_json(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def lemma2_check(sc, tol=1e-10):
    """Compare superchannel capacity with the equierror capacity at the same pe.

    If Blahut-Arimoto stops at its iteration cap its last lower value is
    used, which can only make the check more conservative.
    """
    try:
        lhs, _ = max_mutual_information(sc.channel, tol=tol)
    except ConvergenceError as exc:
        lhs = exc.best[0]
    rhs = equierror_capacity(sc.m, min(max(sc.pe_uniform, 0.0), 1.0))
    return Lemma2Result(float(lhs), float(rhs), bool(lhs >= rhs - 1e-9))


def brute_force_cn(ch, n, m):
    """Best superchannel capacity over all codes and all deterministic decoders.

    Returns
    -------
    (cn, best_code, best_decoder)
        ``best_decoder[i]`` is the message assigned to the ``i``-th output
        sequence in lexicographic order.
    """
    nx, ny = ch.n_inputs, ch.n_outputs
    if n < 1 or m < 2:
        raise DomainError("need n >= 1 and m >= 2")
    n_seq = ny ** n
    work = nx ** (n * m) * m ** n_seq
    if work > BRUTE_LIMIT:
        raise FeasibilityError(f"search size {work} exceeds {BRUTE_LIMIT}")
    inputs = _all_outputs(nx, n)
    outputs = _all_outputs(ny, n)
    # product-channel likelihoods W^n(y | x) for every input/output sequence
    wn = np.ones((inputs.shape[0], n_seq))
    for t in range(n):
        wn *= ch.transition[inputs[:, t][:, None], outputs[:, t][None, :]]
    onehots = np.eye(m)
    best = (-math.inf, None, None)
    seen = {}
    for words in itertools.product(range(inputs.shape[0]), repeat=m):
        rows = wn[list(words)]
        for dec in itertools.product(range(m), repeat=n_seq):
            w = rows @ onehots[list(dec)]
            key = tuple(np.round(w, 14).ravel())
            if key not in seen:
                seen[key] = max_mutual_information(DiscreteChannel(w / w.sum(axis=1, keepdims=True)))[0]
            if seen[key] > best[0]:
                best = (seen[key], InnerCode(inputs[list(words)]), np.array(dec))
    return best


def messages_for_rate(n, rate):
    """``m = max(2, round(e^{nR}))``."""
    if rate < 0:
        raise DomainError("rate must be nonnegative")
    return max(2, int(round(math.exp(n * rate))))


def best_random_code(ch, n, m, prior, count, seed):
    """Lowest exact ``pe`` among ``count`` random codes; candidate ``i`` uses substream ``(seed, i)``.

    Ties go to the lowest candidate index.
    """
    best = None
    for i in range(count):
        seq = np.random.SeedSequence(seed, spawn_key=(i,))
        code = random_inner_code(prior, n, m, seq)
        sc = superchannel_exact(code, ch)
        if best is None or sc.pe_uniform < best[1].pe_uniform:
            best = (code, sc)
    return best


def simulate(ch, n, rate, trials, seed, code="random", m=None):
    """Build an inner code, estimate its error rate and check the equierror bound.

    Returns the report dictionary written by the ``dmcsim`` command.
    """
    if m is None:
        m = messages_for_rate(n, rate)
    if code == "repetition":
        if m > ch.n_inputs:
            raise DomainError(f"repetition code needs m <= {ch.n_inputs}")
        inner = repetition_code(n, m)
    elif code == "random":
        prior = classical_error_exponent(ch, math.log(m) / n).prior_star
        prior = np.asarray(prior) / math.fsum(prior)
        inner = random_inner_code(prior, n, m, seed)
    else:
        raise DomainError(f"unknown code kind {code!r}")
    pe, half, counts = superchannel_mc(inner, ch, trials, seed, return_counts=True)
    if ch.n_outputs ** n <= EXACT_LIMIT:
        sc = superchannel_exact(inner, ch)
    else:
        sc = empirical_superchannel(counts)
    lem = lemma2_check(sc)
    return {
        "n": int(n),
        "m": int(m),
        "effective_rate_nats": inner.effective_rate,
        "pe": pe,
        "pe_ci95": half,
        "equierror_lb_nats_per_use": equierror_capacity(m, pe) / n,
        "lemma2": lem.to_json(),
        "seed": int(seed),
    }


__all__ = [
    "InnerCode",
    "Lemma2Result",
    "Superchannel",
    "best_random_code",
    "brute_force_cn",
    "empirical_superchannel",
    "lemma2_check",
    "messages_for_rate",
    "random_inner_code",
    "repetition_code",
    "simulate",
    "superchannel_exact",
    "superchannel_mc",
]
