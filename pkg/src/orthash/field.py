"""Finite-field arithmetic over F_p and small extensions F_{p^e}.

Elements are plain Python ints in ``[0, q)``. For ``e >= 2`` an element
encodes its polynomial coefficients in base ``p`` (digit ``i`` is the
coefficient of ``x**i``), so the integer order is the canonical element
order used by the Bush baseline.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .primes import MAX_PRIME, is_prime

__all__ = ["FieldCtx", "field_new"]


def _poly_mod(a: list[int], mod: Sequence[int], p: int) -> list[int]:
    """Reduce coefficient list ``a`` (low degree first) by monic ``mod``."""
    a = list(a)
    e = len(mod) - 1
    for i in range(len(a) - 1, e - 1, -1):
        c = a[i]
        if c:
            for j in range(e + 1):
                a[i - e + j] = (a[i - e + j] - c * mod[j]) % p
    return a[:e] + [0] * max(0, e - len(a))


def _poly_divides(d: Sequence[int], f: Sequence[int], p: int) -> bool:
    return not any(_poly_mod(list(f), d, p))


def _is_irreducible(mod: Sequence[int], p: int) -> bool:
    e = len(mod) - 1
    if e == 1:
        return True
    # no roots
    for x in range(p):
        if sum(c * pow(x, i, p) for i, c in enumerate(mod)) % p == 0:
            return False
    # no monic factor of degree 2..e//2
    for deg in range(2, e // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if _poly_divides(list(low) + [1], mod, p):
                return False
    return True


def _smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    # lexicographic on (c_{e-1}, ..., c_0)
    for high_first in itertools.product(range(p), repeat=e):
        mod = tuple(reversed(high_first)) + (1,)
        if mod[0] != 0 and _is_irreducible(mod, p):
            return mod
    raise AssertionError(f"no irreducible polynomial of degree {e} over F_{p}")


@dataclass(frozen=True)
class FieldCtx:
    """Immutable arithmetic context for F_q, q = p**e."""

    p: int
    e: int = 1
    modulus: tuple[int, ...] | None = None
    q: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", self.p**self.e)
        if self.e >= 2:
            if self.modulus is None or len(self.modulus) != self.e + 1:
                raise ConfigError("extension field needs a degree-e modulus")
            if self.modulus[-1] != 1 or not _is_irreducible(self.modulus, self.p):
                raise ConfigError(f"modulus {self.modulus} is not monic irreducible")

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    # coefficient-vector conversion (extension fields)
    def _vec(self, x: int) -> list[int]:
        out = []
        for _ in range(self.e):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def _int(self, v: Sequence[int]) -> int:
        x = 0
        for c in reversed(v):
            x = x * self.p + c
        return x

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self._int([(x + y) % self.p for x, y in zip(self._vec(a), self._vec(b))])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        return self._int([-x % self.p for x in self._vec(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        va, vb = self._vec(a), self._vec(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(va):
            if x:
                for j, y in enumerate(vb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self._int(_poly_mod(prod, self.modulus, self.p))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if self.e == 1:
            return pow(a, k, self.p)
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    def horner_eval(self, coeffs: Sequence[int], x: int) -> int:
        """Evaluate sum(coeffs[i] * x**i) with len(coeffs) multiply-adds."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Full addition and multiplication tables, for small q only."""
        if self.q > 4096:
            raise ConfigError("operation tables are limited to q <= 4096")
        q = self.q
        if self.e == 1:
            r = np.arange(q, dtype=np.int64)
            return (r[:, None] + r) % q, (r[:, None] * r) % q
        add = np.empty((q, q), dtype=np.int64)
        mul = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                add[a, b] = add[b, a] = self.add(a, b)
                mul[a, b] = mul[b, a] = self.mul(a, b)
        return add, mul


def field_new(p: int, e: int = 1) -> FieldCtx:
    """Build F_{p^e}; extensions use the lexicographically smallest modulus."""
    if e < 1:
        raise ConfigError("extension degree must be >= 1")
    if p < 2 or p > MAX_PRIME or not is_prime(p):
        raise ConfigError(f"{p} is not a prime below 2**62")
    if p**e > MAX_PRIME:
        raise ConfigError(f"field order {p}^{e} does not fit in 62 bits")
    if e == 1:
        return FieldCtx(p)
    return FieldCtx(p, e, _smallest_irreducible(p, e))
