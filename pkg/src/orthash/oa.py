"""Orthogonal arrays: the code-based builder, baselines, bounds and file IO."""

from __future__ import annotations

import io
import math
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import IO

import numpy as np

from ._backend import kernels
from .codes import BuildPlan, plan_rs
from .errors import CapExceededError, ConfigError
from .field import field_new
from .primes import factorize, prime_power

__all__ = [
    "OrthogonalArray",
    "phi",
    "iter_blocks",
    "build_oa",
    "write_oa",
    "stream_oa",
    "read_oa",
    "write_csv",
    "read_csv",
    "bush_oa",
    "product_oa",
    "product_for",
    "rao_bound",
    "rao_gap",
]

DEFAULT_CELL_CAP = 10**8


@dataclass(frozen=True, eq=False)
class OrthogonalArray:
    """An s x m array over {1..n}, claimed to have strength t."""

    entries: np.ndarray
    n: int
    t: int
    provenance: str = "imported"

    def __post_init__(self) -> None:
        E = np.asarray(self.entries)
        if E.ndim != 2:
            raise ConfigError("entries must be a 2-d array")
        if self.n < 1 or not 0 <= self.t <= E.shape[1]:
            raise ConfigError(f"bad parameters n={self.n}, t={self.t}, m={E.shape[1]}")
        if E.size and (E.min() < 1 or E.max() > self.n):
            raise ConfigError(f"entries must lie in [1, {self.n}]")
        if E.shape[0] == 0 or E.shape[0] % self.n**self.t:
            raise ConfigError(f"s={E.shape[0]} is not a positive multiple of n^t")
        object.__setattr__(self, "entries", E)

    @property
    def s(self) -> int:
        return self.entries.shape[0]

    @property
    def m(self) -> int:
        return self.entries.shape[1]

    @property
    def lam(self) -> int:
        return self.s // self.n**self.t

    def header(self) -> str:
        return f"OA {self.s} {self.m} {self.n} {self.t} {self.lam}"


def phi(q: int, n: int, beta, x):
    """The (q-1)/n-to-1 map from F_q minus {beta} onto {1..n}.

    Works elementwise when ``beta`` or ``x`` are integer arrays.
    """
    if np.any(np.equal(x, beta)):
        raise ValueError("phi is undefined at the bad value")
    return 1 + (((x + q - 1 - beta) % q) % n)


def _check_cap(plan: BuildPlan, cell_cap: int) -> None:
    cells = plan.rows * plan.m
    if cells > cell_cap:
        raise CapExceededError(
            f"array would have {plan.rows} x {plan.m} = {cells} cells (cap {cell_cap})"
        )


def iter_blocks(
    plan: BuildPlan,
    cell_cap: int = DEFAULT_CELL_CAP,
    chunk_rows: int = 1 << 16,
    threads: int = 1,
) -> Iterator[np.ndarray]:
    """Yield the rows of the array in order, in blocks of whole codewords.

    Codewords are visited in lexicographic order of their coefficient
    vectors, so the output is fully determined by the plan.
    """
    _check_cap(plan, cell_cap)
    block = plan.n**plan.tau
    per_chunk = max(1, chunk_rows // block)
    total = plan.q**plan.k
    G, b = plan.code.generator, plan.bad.b
    spans = [(c0, min(total, c0 + per_chunk)) for c0 in range(0, total, per_chunk)]

    def run(span: tuple[int, int]) -> np.ndarray:
        return kernels.build_rows(G, b, plan.q, plan.n, plan.tau, span[0], span[1])

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            yield from pool.map(run, spans)
    else:
        for span in spans:
            yield run(span)


def build_oa(
    plan: BuildPlan, cell_cap: int = DEFAULT_CELL_CAP, threads: int = 1
) -> OrthogonalArray:
    """Materialize the whole array for ``plan`` (rows = n**tau * q**k)."""
    E = np.concatenate(list(iter_blocks(plan, cell_cap, threads=threads)))
    assert E.shape == (plan.rows, plan.m)
    return OrthogonalArray(E, plan.n, plan.t, plan.provenance)


# -- text format -----------------------------------------------------------


def _write_rows(fh: IO[str], rows: np.ndarray, offset: int = 0) -> None:
    np.savetxt(fh, rows + offset, fmt="%d", delimiter=" ", newline="\n")


def stream_oa(
    plan: BuildPlan,
    fh: IO[str],
    cell_cap: int = DEFAULT_CELL_CAP,
    threads: int = 1,
) -> None:
    """Write the array for ``plan`` in the text format without holding it in memory."""
    _check_cap(plan, cell_cap)
    lam = plan.rows // plan.n**plan.t
    fh.write(f"OA {plan.rows} {plan.m} {plan.n} {plan.t} {lam}\n")
    for block in iter_blocks(plan, cell_cap, threads=threads):
        _write_rows(fh, block)


def write_oa(A: OrthogonalArray, fh: IO[str] | str | Path) -> None:
    """Header ``OA s m n t lambda`` then one space-separated row per line."""
    if isinstance(fh, (str, Path)):
        with open(fh, "w", newline="\n") as f:
            return write_oa(A, f)
    fh.write(A.header() + "\n")
    _write_rows(fh, A.entries)


def read_oa(fh: IO[str] | str | Path) -> OrthogonalArray:
    if isinstance(fh, (str, Path)):
        with open(fh) as f:
            return read_oa(f)
    head = fh.readline().split()
    if len(head) != 6 or head[0] != "OA":
        raise ConfigError("not an OA text file (expected 'OA s m n t lambda' header)")
    try:
        s, m, n, t, lam = map(int, head[1:])
    except ValueError:
        raise ConfigError("malformed OA header") from None
    E = np.loadtxt(fh, dtype=np.int64, ndmin=2).reshape(-1, m)
    if E.shape != (s, m):
        raise ConfigError(f"header promises {s}x{m} entries, file has {E.shape}")
    A = OrthogonalArray(E.astype(np.int32), n, t)
    if A.lam != lam:
        raise ConfigError(f"header lambda {lam} does not match s/n^t = {A.lam}")
    return A


def write_csv(
    A: OrthogonalArray,
    fh: IO[str] | str | Path,
    header: bool = False,
    zero_based: bool = False,
) -> None:
    if isinstance(fh, (str, Path)):
        with open(fh, "w", newline="\n") as f:
            return write_csv(A, f, header, zero_based)
    if header:
        fh.write(",".join(f"c{j + 1}" for j in range(A.m)) + "\n")
    np.savetxt(fh, A.entries - int(zero_based), fmt="%d", delimiter=",", newline="\n")


def read_csv(
    fh: IO[str] | str | Path, n: int, t: int, zero_based: bool = False
) -> OrthogonalArray:
    text = Path(fh).read_text() if isinstance(fh, (str, Path)) else fh.read()
    lines = text.splitlines()
    if lines and not lines[0].replace(",", "").strip().lstrip("-").isdigit():
        lines = lines[1:]
    E = np.loadtxt(io.StringIO("\n".join(lines)), dtype=np.int64, delimiter=",", ndmin=2)
    return OrthogonalArray((E + int(zero_based)).astype(np.int32), n, t)


# -- baselines -------------------------------------------------------------


def bush_oa(n: int, m: int, t: int) -> OrthogonalArray:
    """All n**t polynomials of degree < t over F_n, evaluated at m points.

    Points are the first min(m, n) field elements in canonical order; when
    m = n + 1 the last column is the leading coefficient (the point at
    infinity). Element k is written as symbol k + 1.
    """
    pe = prime_power(n)
    if pe is None:
        raise ConfigError(f"Bush construction needs a prime power, got n={n}")
    if m > n + 1:
        raise ConfigError(f"Bush construction needs m <= n+1 (m={m}, n={n})")
    if not 1 <= t <= m:
        raise ConfigError(f"need 1 <= t <= m (t={t}, m={m})")
    F = field_new(*pe)
    add, mul = F.tables()
    coeffs = np.indices((n,) * t).reshape(t, -1).T  # column i = coefficient of x**i
    E = np.empty((n**t, m), dtype=np.int32)
    for col, x in enumerate(range(min(m, n))):
        acc = np.zeros(n**t, dtype=np.int64)
        for i in range(t - 1, -1, -1):
            acc = add[mul[acc, x], coeffs[:, i]]
        E[:, col] = acc + 1
    if m == n + 1:
        E[:, n] = coeffs[:, t - 1] + 1
    return OrthogonalArray(E, n, t, "bush")


def product_oa(A: OrthogonalArray, B: OrthogonalArray) -> OrthogonalArray:
    """Entry-wise Cartesian product; symbol (a, b) is written (a-1)*B.n + b."""
    if A.m != B.m:
        raise ConfigError(f"column counts differ ({A.m} vs {B.m})")
    left = np.repeat(A.entries, B.s, axis=0).astype(np.int64)
    right = np.tile(B.entries, (A.s, 1)).astype(np.int64)
    n = A.n * B.n
    E = (left - 1) * B.n + right
    return OrthogonalArray(E.astype(np.int32), n, min(A.t, B.t), "product")


def product_for(n: int, m: int, t: int, cell_cap: int = DEFAULT_CELL_CAP) -> OrthogonalArray:
    """Product over the prime-power factors of n.

    Each factor uses Bush when m <= factor + 1, else the Reed-Solomon
    builder for that factor.
    """
    parts = [_factor_array(p**e, m, t, cell_cap) for p, e in sorted(factorize(n).items())]
    out = parts[0]
    for part in parts[1:]:
        out = product_oa(out, part)
    return out


def _factor_array(f: int, m: int, t: int, cell_cap: int) -> OrthogonalArray:
    if m <= f + 1:
        return bush_oa(f, m, t)
    return build_oa(plan_rs(f, m, t), cell_cap)


def factor_sizes(n: int, m: int, t: int) -> list[tuple[int, str, int]]:
    """(factor, method, rows) for each prime-power factor, without building."""
    out = []
    for p, e in sorted(factorize(n).items()):
        f = p**e
        if m <= f + 1:
            out.append((f, "bush", f**t))
        else:
            out.append((f, "rs", plan_rs(f, m, t).rows))
    return out


def rao_bound(m: int, n: int, t: int) -> int:
    """Lower bound C(m, t//2) * (n-1)**(t//2) on the rows of any OA."""
    if n < 2 or not 0 <= t <= m:
        raise ConfigError(f"need n >= 2 and t <= m (m={m}, n={n}, t={t})")
    h = t // 2
    return math.comb(m, h) * (n - 1) ** h


def rao_gap(s: int, m: int, n: int, t: int) -> Fraction:
    """Exact ratio of a row count to the Rao bound."""
    return Fraction(s, rao_bound(m, n, t))

