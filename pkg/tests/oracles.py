"""Brute-force reference computations, independent of the library code paths."""

from __future__ import annotations

import itertools
from collections import Counter

import numpy as np


def is_prime_trial(x: int) -> bool:
    if x < 2:
        return False
    d = 2
    while d * d <= x:
        if x % d == 0:
            return False
        d += 1
    return True


def sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return flags


def all_codewords(G, p: int) -> list[tuple[int, ...]]:
    G = [[int(x) for x in row] for row in np.asarray(G)]
    k, m = len(G), len(G[0])
    out = []
    for c in itertools.product(range(p), repeat=k):
        out.append(tuple(sum(c[i] * G[i][j] for i in range(k)) % p for j in range(m)))
    return out


def min_distance(G, p: int) -> int:
    """Minimum weight over all nonzero codewords, by full enumeration."""
    G = np.asarray(G, dtype=np.int64) % p
    coeffs = np.array(list(itertools.product(range(p), repeat=G.shape[0])), dtype=np.int64)
    weights = ((coeffs @ G) % p != 0).sum(axis=1)
    return int(weights[coeffs.any(axis=1)].min())


def max_agreement(G, p: int, b) -> int:
    b = tuple(int(x) % p for x in b)
    return max(sum(1 for x, y in zip(u, b) if x == y) for u in all_codewords(G, p))


def dual_distance(G, p: int, limit: int | None = None) -> int | None:
    """Smallest weight of a nonzero v with G v = 0, by enumerating supports.

    Vectors are normalized (first nonzero entry 1). Returns None if no dual
    vector of weight <= limit exists.
    """
    G = np.asarray(G, dtype=np.int64) % p
    m = G.shape[1]
    limit = m if limit is None else limit
    for w in range(1, limit + 1):
        rest = list(itertools.product(range(1, p), repeat=w - 1))
        rest = np.array(rest, dtype=np.int64).reshape(len(rest), w - 1)
        vals = np.hstack([np.ones((len(rest), 1), dtype=np.int64), rest])
        for S in itertools.combinations(range(m), w):
            if not ((vals @ G[:, S].T) % p).any(axis=1).all():
                return w
    return None


def is_oa(rows, n: int, t: int) -> bool:
    rows = [tuple(int(x) for x in r) for r in np.asarray(rows)]
    s, m = len(rows), len(rows[0])
    if s % n**t:
        return False
    lam = s // n**t
    for cols in itertools.combinations(range(m), t):
        c = Counter(tuple(r[j] for j in cols) for r in rows)
        if len(c) != n**t or any(v != lam for v in c.values()):
            return False
    return True


def hash_distribution(n: int, t: int, p: int, points) -> dict[tuple[int, ...], int]:
    """Weights of each output tuple, summing over polynomials and replacement fills.

    Counts (polynomial, fill) pairs where fill ranges over [n]^(#bad points),
    scaled so every polynomial contributes n**t in total.
    """
    out: Counter = Counter()
    for a in itertools.product(range(p), repeat=t):
        syms = []
        for x in points:
            y = sum(a[i] * pow(x, i, p) for i in range(t)) % p
            bad = pow(x, t, p)
            syms.append(None if y == bad else 1 + (((y + p - 1 - bad) % p) % n))
        nbad = sum(s is None for s in syms)
        for fill in itertools.product(range(1, n + 1), repeat=nbad):
            it = iter(fill)
            tup = tuple(next(it) if s is None else s for s in syms)
            out[tup] += n ** (t - nbad)
    return out
