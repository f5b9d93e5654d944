"""Exact and statistical checks for arrays and hash families.

Correctness checks use integer arithmetic only. The chi-square test is a
smoke test for parameters too large to enumerate.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import stats

from ._backend import kernels
from .errors import CapExceededError, ConfigError
from .oa import OrthogonalArray

__all__ = [
    "VerifyReport",
    "verify_oa",
    "verify_matrix",
    "HashDistribution",
    "exact_hash_distribution",
    "ChiSquareResult",
    "chi_square_hash",
    "hash_family_sampler",
]

DEFAULT_WORK_CAP = 10**9


@dataclass
class VerifyReport:
    passed: bool
    t: int
    lam: int | None
    subsets: int
    worst_dev: int
    per_subset: dict[tuple[int, ...], int] = field(default_factory=dict)
    work: int = 0
    diagnosis: str = ""

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "t": self.t,
            "lambda": self.lam,
            "subsets": self.subsets,
            "worst_dev": self.worst_dev,
        }

    def to_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = (
            f"{status} strength={self.t} lambda={self.lam} "
            f"subsets={self.subsets} worst_dev={self.worst_dev}"
        )
        return f"{line} ({self.diagnosis})" if self.diagnosis else line


def verify_matrix(
    entries: np.ndarray, n: int, t: int, work_cap: int = DEFAULT_WORK_CAP
) -> VerifyReport:
    """Count every projected t-tuple in every t-subset of columns."""
    E = np.asarray(entries)
    s, m = E.shape
    if not 0 <= t <= m:
        raise ConfigError(f"strength {t} out of range for {m} columns")
    n_subsets = math.comb(m, t)
    work = n_subsets * (s * t + n**t)
    if work > work_cap:
        raise CapExceededError(f"verification needs {work} cell visits (cap {work_cap})")
    if s == 0 or s % n**t:
        return VerifyReport(
            False, t, None, 0, 0, work=0,
            diagnosis=f"s={s} is not a positive multiple of n^t={n**t}",
        )
    if E.min() < 1 or E.max() > n:
        return VerifyReport(False, t, None, 0, 0, diagnosis=f"entries outside [1, {n}]")
    lam = s // n**t
    subsets, worst = kernels.subset_worst_deviation(
        np.ascontiguousarray(E, dtype=np.int32), n, t, lam
    )
    per = {tuple(c): int(w) for c, w in zip(subsets, worst)}
    worst_dev = int(worst.max()) if len(worst) else 0
    return VerifyReport(worst_dev == 0, t, lam, len(subsets), worst_dev, per, work)


def verify_oa(A: OrthogonalArray, t: int | None = None, work_cap: int = DEFAULT_WORK_CAP) -> VerifyReport:
    """Check that every t columns of A contain each tuple exactly s/n^t times."""
    return verify_matrix(A.entries, A.n, A.t if t is None else t, work_cap)


@dataclass
class HashDistribution:
    passed: bool
    points: tuple[int, ...]
    counts: np.ndarray  # shape (n,)*t, integer weights out of (p*n)**t
    expected: int

    @property
    def probabilities(self) -> dict[tuple[int, ...], Fraction]:
        total = int(self.counts.sum())
        return {idx: Fraction(int(c), total) for idx, c in np.ndenumerate(self.counts)}


def exact_hash_distribution(
    n: int,
    m: int,
    t: int,
    p: int,
    points: Sequence[int],
    work_cap: int = DEFAULT_WORK_CAP,
) -> HashDistribution:
    """Exact joint law of the family's values at ``points``.

    Enumerates all p**t polynomials. Each tuple alpha gets the weight
    sum over polynomials of the product of per-point factors (n if the point
    is good and maps to alpha's symbol, 0 if good and it does not, 1 if bad).
    The family is uniform at ``points`` iff every weight equals p**t.
    """
    pts = tuple(int(x) for x in points)
    if len(pts) != t or len(set(pts)) != t or any(not 1 <= x <= m for x in pts):
        raise ConfigError(f"need {t} distinct points in [1, {m}]")
    if p % n != 1 or p <= m:
        raise ConfigError(f"p={p} must be = 1 (mod {n}) and exceed m={m}")
    work = p**t * n**t
    if work > work_cap:
        raise CapExceededError(f"enumeration needs {work} cells (cap {work_cap})")
    counts = kernels.hash_counts(n, t, p, pts).reshape((n,) * t)
    expected = p**t
    return HashDistribution(bool((counts == expected).all()), pts, counts, expected)


@dataclass
class ChiSquareResult:
    statistic: float
    threshold: float
    dof: int
    trials: int

    @property
    def below_threshold(self) -> bool:
        return self.statistic <= self.threshold


def chi_square_hash(
    sampler: Callable[[np.random.Generator], Callable[[int], int]],
    n: int,
    points: Sequence[int],
    trials: int,
    seed: int = 0,
    quantile: float = 0.999,
) -> ChiSquareResult:
    """Pearson statistic of sampled value tuples against the uniform law.

    ``sampler(rng)`` returns a fresh function from the family. Advisory only.
    """
    t = len(points)
    cells = n**t
    if trials < 100 * cells:
        raise ConfigError(f"need at least {100 * cells} trials for {cells} cells")
    rng = np.random.default_rng(seed)
    idx = np.empty(trials, dtype=np.int64)
    for i in range(trials):
        h = sampler(rng)
        k = 0
        for x in points:
            k = k * n + (h(x) - 1)
        idx[i] = k
    observed = np.bincount(idx, minlength=cells)
    return chi_square_counts(observed, quantile)


def chi_square_counts(observed: np.ndarray, quantile: float = 0.999) -> ChiSquareResult:
    observed = np.asarray(observed, dtype=np.float64).reshape(-1)
    trials = int(observed.sum())
    expected = trials / len(observed)
    stat = float(((observed - expected) ** 2).sum() / expected)
    dof = len(observed) - 1
    return ChiSquareResult(stat, float(stats.chi2.ppf(quantile, dof)), dof, trials)


def hash_family_sampler(n: int, m: int, t: int):
    """Sampler drawing independent members of the polynomial family.

    The prime is fixed once; each draw picks fresh coefficients and a fresh
    replacement seed.
    """
    from .hash import HashFunction

    proto = HashFunction.new(n, m, t)
    p = proto.p

    def sample(rng: np.random.Generator) -> HashFunction:
        coeffs = rng.integers(0, p, size=t).tolist()
        seed = int(rng.integers(0, 1 << 63))
        return HashFunction(n, m, t, p, coeffs, seed)

    return sample


def all_point_sets(m: int, t: int):
    return itertools.combinations(range(1, m + 1), t)
