"""Primality testing and prime search in arithmetic progressions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

import numpy as np

from .errors import BudgetExceededError, ConfigError, SearchExhaustedError

__all__ = [
    "MAX_PRIME",
    "PrimeSearchConfig",
    "is_prime",
    "prime_in_ap",
    "eta_for",
    "factorize",
    "prime_power",
]

# Characteristic limit: products of two residues must fit a 128-bit word.
MAX_PRIME = (1 << 62) - 1

# Deterministic for every n < 3.3e24, which covers all 64-bit inputs.
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = _WITNESSES


def is_prime(x: int) -> bool:
    """Deterministic Miller-Rabin test, exact for all x < 2**64."""
    if x < 0:
        raise ValueError("is_prime expects a non-negative integer")
    if x < 2:
        return False
    for sp in _SMALL_PRIMES:
        if x % sp == 0:
            return x == sp
    if x >= 1 << 64:
        raise ValueError("is_prime is only certified below 2**64")
    d = x - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _WITNESSES:
        y = pow(a, d, x)
        if y == 1 or y == x - 1:
            continue
        for _ in range(r - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


def eta_for(n: int, m: int) -> int:
    """Smallest multiple of n that is at least m."""
    if n < 2 or m < 2:
        raise ConfigError(f"eta_for needs n, m >= 2 (got n={n}, m={m})")
    eta = n * -(-m // n)
    assert eta % n == 0 and m <= eta < m + n
    return eta


def _iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for non-negative integers."""
    if x < 2 or k == 1:
        return x
    lo, hi = 1, 1 << (x.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True)
class PrimeSearchConfig:
    """Where to look for a prime ``p = residue (mod modulus)``.

    The search interval is ``(lower, min(modulus**exponent_cap, MAX_PRIME)]``.
    ``exponent_cap`` may be rational; the bound is computed exactly. An
    explicit ``upper_bound`` replaces the power bound.
    """

    modulus: int
    residue: int = 1
    lower: int = 0
    exponent_cap: Fraction | int = 6
    mode: Literal["scan", "sample"] = "scan"
    seed: int = 0
    max_draws: int = 100_000
    upper_bound: int | None = None

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ConfigError("modulus must be >= 2")
        if math.gcd(self.residue, self.modulus) != 1:
            raise ConfigError(
                f"residue {self.residue} is not coprime to modulus {self.modulus}"
            )
        if _exponent(self.exponent_cap) < 1:
            raise ConfigError("exponent_cap must be >= 1")
        if self.mode not in ("scan", "sample"):
            raise ConfigError(f"unknown search mode {self.mode!r}")
        if self.lower < 0:
            raise ConfigError("lower bound must be non-negative")
        if self.upper <= self.lower:
            raise ConfigError(
                f"empty search interval ({self.lower}, {self.upper}]"
            )

    @property
    def upper(self) -> int:
        if self.upper_bound is not None:
            return min(self.upper_bound, MAX_PRIME)
        nu = _exponent(self.exponent_cap)
        bound = _iroot(self.modulus**nu.numerator, nu.denominator)
        return min(bound, MAX_PRIME)


def _exponent(nu) -> Fraction:
    # floats are read as short decimals, not as their exact binary value
    if isinstance(nu, float):
        return Fraction(nu).limit_denominator(10**6)
    return Fraction(nu)


def _first_candidate(modulus: int, residue: int, lower: int) -> int:
    x = lower + 1
    return x + (residue - x) % modulus


def _check(p: int, cfg: PrimeSearchConfig) -> int:
    assert p % cfg.modulus == cfg.residue % cfg.modulus
    assert cfg.lower < p <= cfg.upper
    return p


def prime_in_ap(cfg: PrimeSearchConfig) -> int:
    """Find a prime p with p = residue (mod modulus) and lower < p <= upper.

    ``scan`` returns the smallest such prime. ``sample`` draws candidates
    uniformly from the progression until one is prime; when the progression
    is no larger than ``max_draws`` it is walked in a random permutation so
    that exhaustion is detected exactly.
    """
    if cfg.mode == "scan":
        p = _scan(cfg.modulus, cfg.residue, cfg.lower, cfg.upper)
    else:
        p = _sample(cfg)
    return _check(p, cfg)


@lru_cache(maxsize=1024)
def _scan(modulus: int, residue: int, lower: int, upper: int) -> int:
    p = _first_candidate(modulus, residue, lower)
    while p <= upper:
        if is_prime(p):
            return p
        p += modulus
    raise SearchExhaustedError(
        f"no prime = {residue} (mod {modulus}) in ({lower}, {upper}]"
    )


def _sample(cfg: PrimeSearchConfig) -> int:
    first = _first_candidate(cfg.modulus, cfg.residue, cfg.lower)
    if first > cfg.upper:
        raise SearchExhaustedError("search interval contains no candidates")
    count = (cfg.upper - first) // cfg.modulus + 1
    rng = np.random.default_rng(cfg.seed)
    if count <= cfg.max_draws:
        for j in rng.permutation(count):
            p = first + int(j) * cfg.modulus
            if is_prime(p):
                return p
        raise SearchExhaustedError(
            f"no prime = {cfg.residue} (mod {cfg.modulus}) "
            f"in ({cfg.lower}, {cfg.upper}]"
        )
    for _ in range(cfg.max_draws):
        p = first + int(rng.integers(0, count)) * cfg.modulus
        if is_prime(p):
            return p
    raise BudgetExceededError(
        f"no prime found after {cfg.max_draws} random draws"
    )


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, e) with n = p**e, or None if n is not a prime power."""
    if n < 2:
        return None
    f = factorize(n)
    if len(f) != 1:
        return None
    ((p, e),) = f.items()
    return p, e
