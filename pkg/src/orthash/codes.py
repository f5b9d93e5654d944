"""Linear codes over prime fields that feed the array builder.

Two families are provided: nested Reed-Solomon codes (deterministic) and
random codes whose generator has every ``t`` columns independent (rejection
sampled). Each comes with a "far" vector ``b`` whose agreement with any
codeword is bounded by ``tau``. New families plug in through
:func:`register_provider`.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np

from ._backend import kernels
from ._pykernels import _codewords
from .errors import BudgetExceededError, CapExceededError, ConfigError
from .primes import MAX_PRIME, PrimeSearchConfig, eta_for, is_prime, prime_in_ap

__all__ = [
    "LinearCode",
    "FarVector",
    "BuildPlan",
    "rank_mod_p",
    "row_basis",
    "rs_code",
    "rs_bad_vector",
    "dual_distance_at_least",
    "far_from_code",
    "gv_condition",
    "gv_random_code",
    "random_far_vector",
    "plan_rs",
    "plan_random",
    "register_provider",
    "get_provider",
]

Seed = int | np.random.Generator

ENUMERATION_LIMIT = 10**7
DEFAULT_ATTEMPTS = 1000


def row_basis(M, p: int) -> np.ndarray:
    """Reduced row-echelon basis of the row space of M over F_p."""
    rows = [[int(x) % p for x in r] for r in np.asarray(M)]
    width = len(rows[0]) if rows else 0
    rank = 0
    for col in range(width):
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
    return np.array(rows[:rank], dtype=np.int64).reshape(rank, width)


def rank_mod_p(M, p: int) -> int:
    return len(row_basis(M, p))


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Row space of ``generator`` (k x m, full row rank) over F_p.

    ``dual_distance`` is a lower bound on the minimum distance of the dual
    code; ``dual_provenance`` says whether it was derived analytically or
    checked by :func:`dual_distance_at_least`.
    """

    p: int
    generator: np.ndarray
    dual_distance: int | None = None
    dual_provenance: Literal["analytic", "verified"] | None = None
    name: str = "linear"

    def __post_init__(self) -> None:
        G = np.array(self.generator, dtype=np.int64)
        if G.ndim != 2 or G.shape[0] < 1:
            raise ConfigError("generator must be a non-empty 2-d matrix")
        if not is_prime(self.p) or self.p > MAX_PRIME:
            raise ConfigError(f"{self.p} is not a supported prime")
        G %= self.p
        G.setflags(write=False)
        object.__setattr__(self, "generator", G)
        if rank_mod_p(G, self.p) != G.shape[0]:
            raise ConfigError("generator matrix is not of full row rank")
        if self.dual_provenance == "verified" and self.dual_distance is not None:
            if not dual_distance_at_least(self, self.dual_distance):
                raise ConfigError("declared dual distance does not verify")

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def m(self) -> int:
        return self.generator.shape[1]

    def encode(self, coeffs) -> np.ndarray:
        c = np.asarray(coeffs, dtype=object)
        return np.asarray(c @ self.generator.astype(object) % self.p, dtype=np.int64)

    def codewords(self, chunk: int = 1 << 16):
        """Yield all p**k codewords in blocks, coefficient vectors lexicographic."""
        total = self.p**self.k
        for c0 in range(0, total, chunk):
            yield _codewords(self.generator, self.p, c0, min(total, c0 + chunk))


@dataclass(frozen=True, eq=False)
class FarVector:
    """Vector ``b`` agreeing with every codeword on at most ``tau`` positions."""

    b: np.ndarray
    tau: int

    def __post_init__(self) -> None:
        b = np.array(self.b, dtype=np.int64)
        b.setflags(write=False)
        object.__setattr__(self, "b", b)
        if self.tau < 0:
            raise ConfigError("tau must be non-negative")


def rs_code(p: int, m: int, a: int) -> LinearCode:
    """Evaluations at 1..m of all polynomials of degree <= a over F_p."""
    if m > p:
        raise ConfigError(f"Reed-Solomon length m={m} exceeds field size p={p}")
    if not 0 <= a < m:
        raise ConfigError(f"degree bound a={a} must satisfy 0 <= a < m={m}")
    pts = np.arange(1, m + 1, dtype=object)
    G = np.array([[pow(int(j), i, p) for j in pts] for i in range(a + 1)], dtype=np.int64)
    # dual of an MDS [m, a+1] code is MDS [m, m-a-1]: distance a+2
    # (a = m-1: the dual is zero and every m columns are independent)
    return LinearCode(p, G, a + 2, "analytic", name=f"RS[{m},{a + 1}]_{p}")


def rs_bad_vector(p: int, m: int, t: int) -> FarVector:
    """b_j = j**t: in the degree-t code but not the degree-(t-1) one."""
    if m > p:
        raise ConfigError(f"m={m} exceeds p={p}")
    if not 1 <= t <= m:
        raise ConfigError(f"t={t} must satisfy 1 <= t <= m={m}")
    # for t < m, x**t - h(x) has at most t roots; for t = m the bound is trivial
    return FarVector([pow(j, t, p) for j in range(1, m + 1)], t)


def dual_distance_at_least(code: LinearCode, d: int) -> bool:
    """True iff every d-1 columns of the generator are linearly independent."""
    if not 1 <= d <= code.m + 1:
        raise ConfigError(f"d={d} out of range [1, {code.m + 1}]")
    return kernels.subsets_full_rank(code.generator, code.p, d - 1)


def far_from_code(
    code: LinearCode,
    b,
    tau: int,
    method: Literal["subsets", "enumerate"] = "subsets",
) -> bool:
    """True iff no codeword agrees with ``b`` on tau+1 or more coordinates.

    ``subsets`` checks, for each (tau+1)-subset I, whether the system
    (cG)_I = b_I is solvable. ``enumerate`` walks all codewords and is kept
    as a cross-check for small codes.
    """
    b = np.asarray(b, dtype=np.int64)
    if b.shape != (code.m,):
        raise ConfigError(f"vector length {b.shape} does not match code length {code.m}")
    if tau < 0:
        raise ConfigError("tau must be non-negative")
    b = b % code.p
    if method == "subsets":
        return not kernels.any_subset_consistent(code.generator, b, code.p, tau + 1)
    if method != "enumerate":
        raise ConfigError(f"unknown method {method!r}")
    if code.p**code.k > ENUMERATION_LIMIT:
        raise CapExceededError(f"{code.p}^{code.k} codewords is too many to enumerate")
    worst = 0
    for U in code.codewords():
        worst = max(worst, int((U == b).sum(axis=1).max()))
    return worst <= tau


def gv_condition(m: int, t: int, p: int, ell: int) -> tuple[int, Fraction, bool]:
    """Left side, right side and truth of sum_{i<=t} C(m,i)(p-1)^i <= p^ell/4."""
    lhs = sum(math.comb(m, i) * (p - 1) ** i for i in range(1, t + 1))
    rhs = Fraction(p**ell, 4)
    return lhs, rhs, lhs <= rhs


def _rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _uniform(rng: np.random.Generator, p: int, shape) -> np.ndarray:
    return rng.integers(0, p, size=shape, dtype=np.int64)


def gv_random_code(
    m: int,
    t: int,
    p: int,
    ell: int,
    seed: Seed = 0,
    max_attempts: int = DEFAULT_ATTEMPTS,
) -> tuple[LinearCode, int]:
    """Sample ell x m matrices until every t columns are independent.

    Returns the row-space code (dimension = rank) and the number of draws.
    The counting condition of :func:`gv_condition` is not required; it only
    bounds the failure probability of a single draw.
    """
    if ell < 1 or not 1 <= t <= m:
        raise ConfigError(f"need ell >= 1 and 1 <= t <= m (ell={ell}, t={t}, m={m})")
    if not is_prime(p):
        raise ConfigError(f"{p} is not prime")
    rng = _rng(seed)
    for attempt in range(1, max_attempts + 1):
        M = _uniform(rng, p, (ell, m))
        if kernels.subsets_full_rank(M, p, t):
            code = LinearCode(p, row_basis(M, p), t + 1, "verified", name="random")
            return code, attempt
    raise BudgetExceededError(f"no suitable {ell}x{m} matrix in {max_attempts} draws")


def random_far_vector(
    code: LinearCode,
    s_prime: int,
    seed: Seed = 0,
    max_attempts: int = DEFAULT_ATTEMPTS,
) -> tuple[FarVector, int]:
    """Sample uniform b until it agrees with every codeword on <= s_prime positions."""
    rng = _rng(seed)
    for attempt in range(1, max_attempts + 1):
        b = _uniform(rng, code.p, code.m)
        if s_prime >= code.m or far_from_code(code, b, s_prime):
            return FarVector(b, s_prime), attempt
    raise BudgetExceededError(f"no far vector in {max_attempts} draws")


@dataclass(frozen=True, eq=False)
class BuildPlan:
    """Everything the array builder needs: field order, code, bad vector."""

    n: int
    t: int
    q: int
    code: LinearCode
    bad: FarVector
    provenance: str
    attempts: dict[str, int] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.code.m

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def tau(self) -> int:
        return self.bad.tau

    @property
    def rows(self) -> int:
        return self.n**self.tau * self.q**self.k

    def check(self, verify_far: bool = True) -> None:
        """Raise ConfigError unless every hypothesis of the builder holds."""
        if not 2 <= self.t <= self.m or self.n < 2:
            raise ConfigError("need n >= 2 and 2 <= t <= m")
        if self.q != self.code.p or not is_prime(self.q):
            raise ConfigError("field order must be the code's prime")
        if self.q % self.n != 1:
            raise ConfigError(f"q={self.q} is not 1 mod n={self.n}")
        if self.bad.b.shape != (self.m,):
            raise ConfigError("bad vector length does not match code length")
        if self.code.dual_distance is None or self.code.dual_distance < self.t + 1:
            raise ConfigError("code dual distance is below t+1")
        if verify_far and not far_from_code(self.code, self.bad.b, self.tau):
            raise ConfigError("bad vector is not far from the code")

    def describe(self) -> dict[str, int | str]:
        return {
            "provenance": self.provenance,
            "n": self.n,
            "m": self.m,
            "t": self.t,
            "q": self.q,
            "tau": self.tau,
            "k": self.k,
            "s": self.rows,
        }


def plan_rs(
    n: int,
    m: int,
    t: int,
    prime_mode: Literal["scan", "sample"] = "scan",
    seed: int = 0,
    exponent_cap: Fraction | int = 6,
) -> BuildPlan:
    """Reed-Solomon plan: q is the first prime = 1 (mod eta) above eta."""
    if n < 2 or not 2 <= t <= m:
        raise ConfigError(f"need n >= 2 and 2 <= t <= m (n={n}, m={m}, t={t})")
    eta = eta_for(n, m)
    q = prime_in_ap(
        PrimeSearchConfig(eta, 1, eta, exponent_cap, mode=prime_mode, seed=seed)
    )
    assert q % n == 1 and q > m
    plan = BuildPlan(n, t, q, rs_code(q, m, t - 1), rs_bad_vector(q, m, t), "rs")
    assert plan.tau == t and plan.k == t
    return plan


def random_prime_floor(n: int, m: int, t: int) -> int:
    """Largest integer below which the random-code prime must not fall."""
    return math.floor((m * math.e / t) ** 3)


def plan_random(
    n: int,
    m: int,
    t: int,
    seed: int = 0,
    p_override: int | None = None,
    max_attempts: int = DEFAULT_ATTEMPTS,
) -> BuildPlan:
    """Random-code plan: dimension <= 2t, agreement bound 3t.

    Without ``p_override`` the prime is the smallest p = 1 (mod n) with
    p > (m e / t)**3, which keeps each rejection loop at O(1) expected draws.
    """
    if n < 2 or not 2 <= t <= m:
        raise ConfigError(f"need n >= 2 and 2 <= t <= m (n={n}, m={m}, t={t})")
    if p_override is None:
        lower = random_prime_floor(n, m, t)
        p = prime_in_ap(PrimeSearchConfig(n, 1, lower, upper_bound=(n + lower + 1) ** 6))
    else:
        p = p_override
        if not is_prime(p) or p % n != 1:
            raise ConfigError(f"p_override={p} must be a prime = 1 (mod {n})")
    rng = np.random.default_rng(seed)
    code, code_tries = gv_random_code(m, t, p, 2 * t, rng, max_attempts)
    bad, far_tries = random_far_vector(code, 3 * t, rng, max_attempts)
    return BuildPlan(
        n, t, p, code, bad, "random-code", {"code": code_tries, "far": far_tries}
    )


Provider = Callable[..., BuildPlan]
_PROVIDERS: dict[str, Provider] = {"rs": plan_rs, "random": plan_random}


def register_provider(name: str, provider: Provider) -> None:
    """Make a code family available to :func:`get_provider` and the CLI.

    A provider takes ``(n, m, t, **options)`` and returns a BuildPlan whose
    code has dual distance >= t+1 and whose bad vector is tau-far.
    """
    _PROVIDERS[name] = provider


def get_provider(name: str) -> Provider:
    try:
        return _PROVIDERS[name]
    except KeyError:
        raise ConfigError(f"unknown code provider {name!r}") from None
