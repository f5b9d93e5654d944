# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Semantics match ``_pykernels`` exactly."""

import itertools

import numpy as np

from libc.stdint cimport int32_t, int64_t, uint64_t
from libc.stdlib cimport free, malloc

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t orthash_mulmod(uint64_t a, uint64_t b, uint64_t p) {
        return (uint64_t)(((unsigned __int128)a * b) % p);
    }
    """
    uint64_t mulmod "orthash_mulmod"(uint64_t a, uint64_t b, uint64_t p) nogil

NAME = "cython"


cdef inline uint64_t addmod(uint64_t a, uint64_t b, uint64_t p) noexcept nogil:
    cdef uint64_t s = a + b
    return s - p if s >= p else s


cdef inline uint64_t submod(uint64_t a, uint64_t b, uint64_t p) noexcept nogil:
    return a - b if a >= b else a + p - b


cdef uint64_t invmod(uint64_t a, uint64_t p) noexcept nogil:
    cdef int64_t t = 0, newt = 1, r = <int64_t>p, newr = <int64_t>a, qt, tmp
    while newr != 0:
        qt = r // newr
        tmp = t - qt * newt
        t = newt
        newt = tmp
        tmp = r - qt * newr
        r = newr
        newr = tmp
    if t < 0:
        t += <int64_t>p
    return <uint64_t>t


cdef int eliminate(uint64_t* a, int rows, int pivot_cols, int width, uint64_t p) noexcept nogil:
    """Row-reduce a rows x width buffer, pivoting in the first pivot_cols columns.

    Returns the rank of the pivot part. Rows at index >= rank have zero
    pivot part afterwards.
    """
    cdef int rank = 0, col, r, c, piv
    cdef uint64_t inv, f, tmp
    for col in range(pivot_cols):
        if rank == rows:
            break
        piv = -1
        for r in range(rank, rows):
            if a[r * width + col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for c in range(width):
                tmp = a[piv * width + c]
                a[piv * width + c] = a[rank * width + c]
                a[rank * width + c] = tmp
        inv = invmod(a[rank * width + col], p)
        for c in range(col, width):
            a[rank * width + c] = mulmod(a[rank * width + c], inv, p)
        for r in range(rows):
            if r != rank:
                f = a[r * width + col]
                if f != 0:
                    for c in range(col, width):
                        a[r * width + c] = submod(
                            a[r * width + c], mulmod(f, a[rank * width + c], p), p
                        )
        rank += 1
    return rank


def build_rows(G, b, int64_t q, int64_t n, int tau, int64_t c0, int64_t c1):
    """Rows of the array contributed by codewords c0 .. c1-1 (see _pykernels)."""
    cdef const int64_t[:, ::1] g = np.ascontiguousarray(G, dtype=np.int64)
    cdef const int64_t[::1] bad = np.ascontiguousarray(b, dtype=np.int64)
    cdef int k = g.shape[0], m = g.shape[1]
    cdef int64_t block = n ** tau
    out = np.empty(((c1 - c0) * block, m), dtype=np.int32)
    if c1 <= c0:
        return out
    cdef int32_t[:, ::1] o = out
    cdef int64_t* digits = <int64_t*>malloc(max(k, 1) * sizeof(int64_t))
    cdef int32_t* w = <int32_t*>malloc(m * sizeof(int32_t))
    cdef int* z = <int*>malloc(m * sizeof(int))
    cdef int32_t* v = <int32_t*>malloc(m * sizeof(int32_t))
    cdef int64_t c, rem, row, rep, nv, vi, rr
    cdef int i, j, ell, err = 0, bad_ell = 0
    cdef uint64_t acc, uq = <uint64_t>q
    try:
        with nogil:
            rem = c0
            for i in range(k - 1, -1, -1):
                digits[i] = rem % q
                rem = rem // q
            row = 0
            for c in range(c0, c1):
                ell = 0
                for j in range(m):
                    acc = 0
                    for i in range(k):
                        if digits[i] != 0:
                            acc = addmod(acc, mulmod(<uint64_t>digits[i], <uint64_t>g[i, j], uq), uq)
                    if acc == <uint64_t>bad[j]:
                        z[ell] = j
                        ell += 1
                        w[j] = 0
                    else:
                        w[j] = <int32_t>(1 + ((acc + uq - 1 - <uint64_t>bad[j]) % uq) % <uint64_t>n)
                if ell > tau:
                    err = 1
                    bad_ell = ell
                    break
                rep = 1
                for i in range(tau - ell):
                    rep *= n
                nv = 1
                for i in range(ell):
                    nv *= n
                    v[i] = 0
                for vi in range(nv):
                    for i in range(ell):
                        w[z[i]] = v[i] + 1
                    for rr in range(rep):
                        for j in range(m):
                            o[row, j] = w[j]
                        row += 1
                    i = ell - 1
                    while i >= 0:
                        v[i] += 1
                        if v[i] < n:
                            break
                        v[i] = 0
                        i -= 1
                # next coefficient vector (last digit fastest)
                i = k - 1
                while i >= 0:
                    digits[i] += 1
                    if digits[i] < q:
                        break
                    digits[i] = 0
                    i -= 1
    finally:
        free(digits)
        free(w)
        free(z)
        free(v)
    if err:
        raise ValueError(
            f"codeword agrees with the bad vector on {bad_ell} > tau={tau} coordinates"
        )
    return out


def subset_worst_deviation(E, int64_t n, int t, int64_t lam):
    """Per t-subset of columns, max |count - lam| over all tuples in [n]^t."""
    cdef const int32_t[:, ::1] e = np.ascontiguousarray(E, dtype=np.int32)
    cdef int64_t s = e.shape[0]
    cdef int m = e.shape[1]
    subsets = list(itertools.combinations(range(m), t))
    worst = np.zeros(len(subsets), dtype=np.int64)
    cdef int64_t[::1] wv = worst
    cdef int64_t nt = n ** t
    counts_arr = np.zeros(nt, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    cdef int[::1] cols
    cdef int64_t r, idx, d, best, a
    cdef int i, si
    for si, sub in enumerate(subsets):
        cols = np.asarray(sub, dtype=np.intc)
        with nogil:
            for a in range(nt):
                counts[a] = 0
            for r in range(s):
                idx = 0
                for i in range(t):
                    idx = idx * n + (e[r, cols[i]] - 1)
                counts[idx] += 1
            best = 0
            for a in range(nt):
                d = counts[a] - lam
                if d < 0:
                    d = -d
                if d > best:
                    best = d
            wv[si] = best
    return subsets, worst


def hash_counts(int64_t n, int t, int64_t p, points):
    """Exact tuple weights of the hash family at the given points (see _pykernels)."""
    pts = [int(x) % p for x in points]
    if len(pts) != t:
        raise ValueError("need exactly t points")
    cdef int64_t nt = n ** t
    counts_arr = np.zeros(nt, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    xp_arr = np.empty((t, t + 1), dtype=np.uint64)
    for jj, x in enumerate(pts):
        for ii in range(t + 1):
            xp_arr[jj, ii] = pow(x, ii, p)
    cdef const uint64_t[:, ::1] xp = xp_arr
    cdef uint64_t up = <uint64_t>p
    cdef uint64_t* a = <uint64_t*>malloc(t * sizeof(uint64_t))
    cdef int64_t* sym = <int64_t*>malloc(t * sizeof(int64_t))
    cdef int* badpos = <int*>malloc(t * sizeof(int))
    cdef int64_t* fill = <int64_t*>malloc(t * sizeof(int64_t))
    cdef uint64_t acc
    cdef int i, j, nbad
    cdef int64_t base, weight, nfill, f, idx, npow
    cdef bint done = False
    try:
        with nogil:
            for i in range(t):
                a[i] = 0
            while not done:
                nbad = 0
                for j in range(t):
                    acc = 0
                    for i in range(t):
                        acc = addmod(acc, mulmod(a[i], xp[j, i], up), up)
                    acc = submod(acc, xp[j, t], up)
                    if acc == 0:
                        badpos[nbad] = j
                        nbad += 1
                        sym[j] = 0
                    else:
                        sym[j] = <int64_t>((acc - 1) % <uint64_t>n)
                weight = 1
                for j in range(t - nbad):
                    weight *= n
                nfill = 1
                for j in range(nbad):
                    nfill *= n
                    fill[j] = 0
                for f in range(nfill):
                    for j in range(nbad):
                        sym[badpos[j]] = fill[j]
                    idx = 0
                    for j in range(t):
                        idx = idx * n + sym[j]
                    counts[idx] += weight
                    j = nbad - 1
                    while j >= 0:
                        fill[j] += 1
                        if fill[j] < n:
                            break
                        fill[j] = 0
                        j -= 1
                i = t - 1
                while i >= 0:
                    a[i] += 1
                    if a[i] < up:
                        break
                    a[i] = 0
                    i -= 1
                if i < 0:
                    done = True
    finally:
        free(a)
        free(sym)
        free(badpos)
        free(fill)
    return counts_arr


cdef bint _subset_check(const int64_t[:, ::1] g, const int64_t[::1] rhs, bint with_rhs,
                        int r, uint64_t p, bint want_consistent) noexcept nogil:
    """Walk all r-subsets of columns.

    want_consistent=False: return True iff every subset has full column rank r.
    want_consistent=True: return True iff some subset system c.G_I = rhs_I is solvable.
    """
    cdef int k = g.shape[0], m = g.shape[1]
    cdef int width = k + 1
    cdef int* idx = <int*>malloc(max(r, 1) * sizeof(int))
    cdef uint64_t* buf = <uint64_t*>malloc(max(r, 1) * width * sizeof(uint64_t))
    cdef int i, j, rank
    cdef bint result = not want_consistent, consistent
    for i in range(r):
        idx[i] = i
    while True:
        for i in range(r):
            for j in range(k):
                buf[i * width + j] = <uint64_t>g[j, idx[i]]
            buf[i * width + k] = <uint64_t>rhs[idx[i]] if with_rhs else 0
        rank = eliminate(buf, r, k, width, p)
        if want_consistent:
            consistent = True
            for i in range(rank, r):
                if buf[i * width + k] != 0:
                    consistent = False
                    break
            if consistent:
                result = True
                break
        elif rank < r:
            result = False
            break
        # next combination
        i = r - 1
        while i >= 0 and idx[i] == m - r + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j in range(i + 1, r):
            idx[j] = idx[j - 1] + 1
    free(idx)
    free(buf)
    return result


def subsets_full_rank(G, int64_t p, int r):
    """True iff every r-subset of columns of G is linearly independent over F_p."""
    cdef const int64_t[:, ::1] g = np.ascontiguousarray(G, dtype=np.int64)
    cdef const int64_t[::1] z = np.zeros(g.shape[1], dtype=np.int64)
    if r == 0:
        return True
    if r > g.shape[0] or r > g.shape[1]:
        return False
    cdef bint res
    with nogil:
        res = _subset_check(g, z, False, r, <uint64_t>p, False)
    return bool(res)


def any_subset_consistent(G, b, int64_t p, int r):
    """True iff some r-subset I admits c with (cG)_i = b_i for all i in I."""
    cdef const int64_t[:, ::1] g = np.ascontiguousarray(G, dtype=np.int64)
    cdef const int64_t[::1] rhs = np.ascontiguousarray(b, dtype=np.int64)
    if r > g.shape[1]:
        return False
    if r == 0:
        return True
    cdef bint res
    with nogil:
        res = _subset_check(g, rhs, True, r, <uint64_t>p, True)
    return bool(res)


def hash_gap_batch(coeffs, xs, int64_t p):
    """h(x) - x**t mod p for each x, via t multiply-adds per input."""
    cdef const int64_t[::1] a = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef const int64_t[::1] x = np.ascontiguousarray(xs, dtype=np.int64)
    out = np.empty(x.shape[0], dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef int t = a.shape[0], i
    cdef Py_ssize_t j
    cdef uint64_t acc, xv, up = <uint64_t>p
    with nogil:
        for j in range(x.shape[0]):
            xv = <uint64_t>x[j] % up
            acc = up - 1  # leading coefficient -1 of -x**t
            for i in range(t - 1, -1, -1):
                acc = addmod(mulmod(acc, xv, up), <uint64_t>a[i], up)
            o[j] = <int64_t>acc
    return out
