"""Stability of dimension vectors with respect to a weight.

``beta -> alpha`` (beta generically embeds in alpha) means every
alpha-dimensional representation has a beta-dimensional subrepresentation.
It is decided by the recursion

    beta -> alpha  iff  <beta', alpha - beta> >= 0 for every beta' -> beta,

which is well founded because every beta' involved is <= beta.  A vector
alpha is theta-semistable iff theta.alpha = 0 and theta.beta >= 0 for every
beta -> alpha; stable iff moreover theta.beta > 0 for 0 != beta != alpha.
Characteristic 0 is assumed throughout.
"""
from __future__ import annotations

import itertools
import random
import threading
from dataclasses import dataclass
from math import prod
from typing import Optional

import numpy as np

from .errors import ComplexityError, DomainError, PreconditionError
from .quiver import (
    Quiver, QuiverPair, check_vector, check_weight, pairing, ringel_with_unit,
    tits_form, unit_with_ringel,
)

GUARD = 10 ** 7

NOT_SEMISTABLE = "NotSemistable"
SEMISTABLE_NOT_STABLE = "SemistableNotStable"
STABLE = "Stable"


@dataclass(frozen=True)
class StabilityVerdict:
    tag: str
    witness: Optional[dict] = None

    @property
    def is_stable(self) -> bool:
        return self.tag == STABLE

    @property
    def is_semistable(self) -> bool:
        return self.tag != NOT_SEMISTABLE


def _structure(quiver: Quiver) -> tuple:
    idx = quiver.index
    return len(quiver.vertices), tuple(sorted((idx[a.source], idx[a.target])
                                              for a in quiver.arrows))


class GenericEmbedCache:
    """Memo table ``(quiver structure, alpha) -> set of beta with beta -> alpha``.

    Reads are lock-free dict lookups; inserts take the lock.  Entries are
    deterministic, so two threads racing on the same key store equal values.
    """

    def __init__(self):
        self._table = {}
        self._lock = threading.Lock()

    def get(self, key):
        return self._table.get(key)

    def put(self, key, value):
        with self._lock:
            return self._table.setdefault(key, value)

    def __len__(self):
        return len(self._table)

    def clear(self):
        with self._lock:
            self._table.clear()


DEFAULT_CACHE = GenericEmbedCache()


class _Solver:
    def __init__(self, quiver: Quiver, cache: GenericEmbedCache):
        self.n, self.edges = _structure(quiver)
        self.cache = cache

    def ringel(self, x, y) -> int:
        return (sum(a * b for a, b in zip(x, y))
                - sum(x[s] * y[t] for s, t in self.edges))

    def subs(self, alpha: tuple) -> frozenset:
        """All beta <= alpha with beta -> alpha."""
        key = (self.n, self.edges, alpha)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        out = []
        for beta in itertools.product(*(range(k + 1) for k in alpha)):
            if not any(beta) or beta == alpha:
                out.append(beta)
                continue
            gamma = tuple(a - b for a, b in zip(alpha, beta))
            if all(self.ringel(bp, gamma) >= 0 for bp in self.subs(beta)):
                out.append(beta)
        return self.cache.put(key, frozenset(out))


def _guard(alpha: tuple, force: bool):
    size = prod(k + 1 for k in alpha)
    if size > GUARD and not force:
        raise ComplexityError(
            f"alpha has {size} sub-dimension vectors (limit {GUARD}); pass force=True")


def embeddable_subvectors(quiver: Quiver, alpha, *, cache=None, force=False) -> frozenset:
    """Tuples (in vertex order) of every beta with beta -> alpha."""
    a = check_vector(quiver, alpha, nonnegative=True, name="alpha")
    vec = tuple(a[v] for v in quiver.vertices)
    _guard(vec, force)
    return _Solver(quiver, DEFAULT_CACHE if cache is None else cache).subs(vec)


def generically_embeds(quiver: Quiver, beta, alpha, *, cache=None, force=False) -> bool:
    b = check_vector(quiver, beta, nonnegative=True, name="beta")
    a = check_vector(quiver, alpha, nonnegative=True, name="alpha")
    if any(b[v] > a[v] for v in quiver.vertices):
        raise DomainError("beta is not <= alpha")
    bt = tuple(b[v] for v in quiver.vertices)
    at = tuple(a[v] for v in quiver.vertices)
    if not any(bt) or bt == at:
        return True
    _guard(bt, force)
    solver = _Solver(quiver, DEFAULT_CACHE if cache is None else cache)
    gamma = tuple(x - y for x, y in zip(at, bt))
    return all(solver.ringel(bp, gamma) >= 0 for bp in solver.subs(bt))


def stability_verdict(pair: QuiverPair, theta, *, force=False, cache=None) -> StabilityVerdict:
    """King's criterion over generic subdimension vectors.

    If theta.alpha != 0 the answer is NotSemistable with no witness (no
    proper sub-vector is at fault).  Otherwise the witness is the first
    violating beta in order of (|beta|, entries).
    """
    q = pair.quiver
    theta = check_weight(q, theta)
    if pair.total == 0:
        raise DomainError("alpha is zero")
    if pairing(theta, pair.alpha) != 0:
        return StabilityVerdict(NOT_SEMISTABLE)
    vec = pair.vector
    th = tuple(theta[v] for v in q.vertices)
    subs = embeddable_subvectors(q, pair.alpha, cache=cache, force=force)
    zero_hit = None
    for beta in sorted(subs, key=lambda b: (sum(b), b)):
        if not any(beta) or beta == vec:
            continue
        s = sum(x * y for x, y in zip(th, beta))
        if s < 0:
            return StabilityVerdict(NOT_SEMISTABLE, dict(zip(q.vertices, beta)))
        if s == 0 and zero_hit is None:
            zero_hit = beta
    if zero_hit is not None:
        return StabilityVerdict(SEMISTABLE_NOT_STABLE, dict(zip(q.vertices, zero_hit)))
    return StabilityVerdict(STABLE)


def moduli_dimension(pair: QuiverPair, theta, *, force=False) -> int:
    """1 - <alpha, alpha>, valid when alpha is theta-stable."""
    verdict = stability_verdict(pair, theta, force=force)
    if not verdict.is_stable:
        raise PreconditionError(f"alpha is not theta-stable ({verdict.tag})")
    return 1 - tits_form(pair.quiver, pair.alpha)


def canonical_weight(pair: QuiverPair) -> dict:
    """theta(v) = <e_v, alpha> - <alpha, e_v>; always pairs to 0 with alpha,
    and alpha is stable for it whenever any weight makes alpha stable."""
    q, a = pair.quiver, pair.alpha
    return {v: unit_with_ringel(q, a, v) - ringel_with_unit(q, a, v) for v in q.vertices}


# -- independent check by linear algebra over a prime field ----------------

PRIME = 2_147_483_647


def _rank_mod_p(m: np.ndarray, p: int = PRIME) -> int:
    m = m.copy() % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        below = np.nonzero(m[:, c])[0]
        for i in below:
            if i != r:
                f = int(m[i, c])
                m[i] = (m[i] - (f * m[r]) % p) % p
        r += 1
    return r


def brute_force_embeds(quiver: Quiver, beta, alpha, *, samples: int = 3,
                       max_total: int = 8, seed: int = 0) -> bool:
    """Decide beta -> alpha by sampling representations over GF(p).

    For random representations V of dimension beta and W of dimension
    gamma = alpha - beta, the map h -> (h_t V_a - W_a h_s)_a on
    sum_v Hom(V_v, W_v) is surjective exactly when Ext(V, W) = 0; beta -> alpha
    iff this happens generically.  The generic rank is the maximum over the
    samples.  Meant for small test cases only.
    """
    b = check_vector(quiver, beta, nonnegative=True, name="beta")
    a = check_vector(quiver, alpha, nonnegative=True, name="alpha")
    if any(b[v] > a[v] for v in quiver.vertices):
        raise DomainError("beta is not <= alpha")
    if sum(a.values()) > max_total:
        raise ComplexityError(f"|alpha| > {max_total}: too large for the sampling check")
    g = {v: a[v] - b[v] for v in quiver.vertices}

    # column offsets for the unknowns h_v (gamma(v) x beta(v) each)
    col, off = 0, {}
    for v in quiver.vertices:
        off[v] = col
        col += g[v] * b[v]
    row, roff = 0, {}
    for x in quiver.arrows:
        roff[x.id] = row
        row += g[x.target] * b[x.source]
    if row == 0:
        return True
    if col == 0:
        return False

    rng = random.Random(seed)
    best = 0
    for _ in range(samples):
        m = np.zeros((row, col), dtype=np.int64)
        for x in quiver.arrows:
            s, t = x.source, x.target
            V = [[rng.randrange(PRIME) for _ in range(b[s])] for _ in range(b[t])]
            W = [[rng.randrange(PRIME) for _ in range(g[s])] for _ in range(g[t])]
            # entry (i, j) of h_t V - W h_s, for i < gamma(t), j < beta(s)
            for i in range(g[t]):
                for j in range(b[s]):
                    r = roff[x.id] + i * b[s] + j
                    for k in range(b[t]):        # (h_t)_{ik} V_{kj}
                        c = off[t] + i * b[t] + k
                        m[r, c] = (m[r, c] + V[k][j]) % PRIME
                    for k in range(g[s]):        # W_{ik} (h_s)_{kj}
                        c = off[s] + k * b[s] + j
                        m[r, c] = (m[r, c] - W[i][k]) % PRIME
        best = max(best, _rank_mod_p(m))
        if best == row:
            return True
    return False
