"""Reference implementations of the hot loops, in numpy and plain Python.

Used when the compiled extension is unavailable, and as the second route
in the backend-agreement tests. Every function must match ``_ckernels``
bit for bit.
"""

from __future__ import annotations

import itertools

import numpy as np

NAME = "python"

# Above this, int64 products of residues can overflow.
_SAFE_MODULUS = 1 << 31


def _codewords(G: np.ndarray, q: int, c0: int, c1: int) -> np.ndarray:
    """Codewords c0 .. c1-1, coefficient vectors in lexicographic order."""
    k = G.shape[0]
    idx = np.arange(c0, c1, dtype=np.int64)
    digits = np.empty((len(idx), k), dtype=np.int64)
    for i in range(k - 1, -1, -1):
        idx, digits[:, i] = np.divmod(idx, q)
    if q < _SAFE_MODULUS:
        U = np.zeros((len(digits), G.shape[1]), dtype=np.int64)
        for i in range(k):
            U = (U + digits[:, i, None] * G[i]) % q
        return U
    U = digits.astype(object) @ G.astype(object) % q
    return U


def build_rows(G, b, q: int, n: int, tau: int, c0: int, c1: int) -> np.ndarray:
    """Array rows contributed by codewords c0 .. c1-1.

    Each codeword u yields exactly n**tau rows: for every fix vector v over
    the agreement set Z = {j : u_j = b_j} (lexicographic), n**(tau - |Z|)
    copies of the row with v + 1 at Z and phi_{b_j}(u_j) elsewhere.
    """
    G = np.ascontiguousarray(G, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    m = G.shape[1]
    block = n**tau
    out = np.empty(((c1 - c0) * block, m), dtype=np.int32)
    if c1 <= c0:
        return out
    U = _codewords(G, q, c0, c1)
    agree = U == b
    W = (1 + ((U + q - 1 - b) % q) % n).astype(np.int32)
    fixes: dict[int, np.ndarray] = {}
    for ci in range(len(U)):
        Z = np.flatnonzero(agree[ci])
        ell = len(Z)
        if ell > tau:
            raise ValueError(
                f"codeword agrees with the bad vector on {ell} > tau={tau} coordinates"
            )
        rows = out[ci * block : (ci + 1) * block]
        rows[:] = W[ci]
        if ell:
            if ell not in fixes:
                V = np.indices((n,) * ell).reshape(ell, -1).T + 1
                fixes[ell] = np.repeat(V, n ** (tau - ell), axis=0).astype(np.int32)
            rows[:, Z] = fixes[ell]
    return out


def subset_worst_deviation(E, n: int, t: int, lam: int):
    """Per t-subset of columns, max |count - lam| over all tuples in [n]^t."""
    E = np.asarray(E)
    subsets = list(itertools.combinations(range(E.shape[1]), t))
    worst = np.zeros(len(subsets), dtype=np.int64)
    radix = n ** np.arange(t - 1, -1, -1, dtype=np.int64)
    for si, cols in enumerate(subsets):
        idx = (E[:, cols].astype(np.int64) - 1) @ radix
        counts = np.bincount(idx, minlength=n**t)
        worst[si] = np.abs(counts - lam).max()
    return subsets, worst


def hash_counts(n: int, t: int, p: int, points) -> np.ndarray:
    """Exact tuple weights of the polynomial hash family at ``points``.

    Enumerates all p**t coefficient vectors a. A point x is bad when
    sum(a_i x**i) = x**t. The weight added to tuple alpha is the product of
    per-point factors: n when x is good and maps to alpha's symbol, 0 when
    good and it does not, 1 when bad.
    """
    pts = [int(x) % p for x in points]
    if len(pts) != t:
        raise ValueError("need exactly t points")
    A = np.indices((p,) * t).reshape(t, -1).T.astype(np.int64)
    D = np.empty((len(A), t), dtype=np.int64)
    for j, x in enumerate(pts):
        acc = np.full(len(A), p - 1, dtype=np.int64)
        for i in range(t - 1, -1, -1):
            acc = (acc * x + A[:, i]) % p
        D[:, j] = acc
    bad = D == 0
    sym = (D - 1) % n
    counts = np.zeros((n,) * t, dtype=np.int64)
    patterns = bad @ (1 << np.arange(t))
    for pat in np.unique(patterns):
        sel = patterns == pat
        good = [j for j in range(t) if not (pat >> j) & 1]
        weight = n ** len(good)
        if good:
            radix = n ** np.arange(len(good) - 1, -1, -1, dtype=np.int64)
            part = np.bincount(sym[sel][:, good] @ radix, minlength=n ** len(good))
            part = part.reshape((n,) * len(good)) * weight
            shape = [n if j in good else 1 for j in range(t)]
            counts += part.reshape(shape)
        else:
            counts += int(sel.sum()) * weight
    return counts.reshape(-1)


def _rank_consistent(rows: list[list[int]], k: int, p: int) -> tuple[int, bool]:
    """Row-reduce [A | rhs] pivoting in the first k columns."""
    rank = 0
    for col in range(k):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(len(rows)):
            f = rows[r][col]
            if r != rank and f:
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    consistent = all(row[k] == 0 for row in rows[rank:])
    return rank, consistent


def subsets_full_rank(G, p: int, r: int) -> bool:
    """True iff every r-subset of columns of G is linearly independent over F_p."""
    G = [[int(x) for x in row] for row in np.asarray(G)]
    k = len(G)
    m = len(G[0]) if k else 0
    if r == 0:
        return True
    if r > k or r > m:
        return False
    for cols in itertools.combinations(range(m), r):
        rows = [[G[i][c] for i in range(k)] + [0] for c in cols]
        if _rank_consistent(rows, k, p)[0] < r:
            return False
    return True


def any_subset_consistent(G, b, p: int, r: int) -> bool:
    """True iff some r-subset I admits c with (cG)_i = b_i for all i in I."""
    G = [[int(x) for x in row] for row in np.asarray(G)]
    b = [int(x) for x in b]
    k = len(G)
    m = len(b)
    if r > m:
        return False
    if r == 0:
        return True
    for cols in itertools.combinations(range(m), r):
        rows = [[G[i][c] for i in range(k)] + [b[c]] for c in cols]
        if _rank_consistent(rows, k, p)[1]:
            return True
    return False


def hash_gap_batch(coeffs, xs, p: int) -> np.ndarray:
    """h(x) - x**t mod p for each x, via t multiply-adds per input."""
    a = [int(c) for c in coeffs]
    if p < _SAFE_MODULUS:
        x = np.asarray(xs, dtype=np.int64) % p
        acc = np.full(len(x), p - 1, dtype=np.int64)
        for c in reversed(a):
            acc = (acc * x + c) % p
        return acc
    out = np.empty(len(xs), dtype=np.int64)
    for j, xv in enumerate(xs):
        acc = p - 1
        for c in reversed(a):
            acc = (acc * int(xv) + c) % p
        out[j] = acc
    return out
