"""Strongly t-universal hashing from [m] to [n] for arbitrary n.

A function is a random polynomial h of degree < t over F_p, with
p = 1 (mod n) and p > m. Input x is "bad" when h(x) = x**t; bad inputs get
a uniform replacement value in [n], all others map through
``1 + (((h(x) - x**t - 1) mod p) mod n)``. At most t inputs are bad, so the
replacement store never holds more than t entries.
"""

from __future__ import annotations

import bisect
import hashlib
import threading
from collections.abc import Iterable
from fractions import Fraction
from typing import Literal

import numpy as np

from ._backend import kernels
from .errors import ConfigError
from .primes import MAX_PRIME, PrimeSearchConfig, eta_for, is_prime, prime_in_ap

__all__ = ["HashFunction", "hash_new"]

Mode = Literal["lazy", "derived"]
_MODES: tuple[Mode, ...] = ("lazy", "derived")
_FORMAT_VERSION = 1


def _draw(seed: int, domain: bytes, index: int, bound: int, start: int = 0) -> tuple[int, int]:
    """Uniform integer below ``bound`` from a counter-mode stream.

    Returns the value and the next unused counter position.
    """
    limit = (1 << 64) - (1 << 64) % bound
    i = start
    while True:
        h = hashlib.blake2b(digest_size=8)
        h.update(domain)
        h.update(seed.to_bytes(8, "little"))
        h.update(index.to_bytes(8, "little"))
        h.update(i.to_bytes(8, "little"))
        w = int.from_bytes(h.digest(), "little")
        i += 1
        if w < limit:
            return w % bound, i


class HashFunction:
    """One member of the hash family; call it on x in 1..m to get a value in 1..n.

    ``mode="lazy"`` draws each replacement value from the function's stream
    the first time a bad input is seen and caches it. ``mode="derived"``
    computes the replacement from (seed, x) alone, so evaluation never
    mutates state; it is t-independent only if the stream is ideal.
    """

    def __init__(
        self,
        n: int,
        m: int,
        t: int,
        p: int,
        coeffs: Iterable[int],
        seed: int = 0,
        mode: Mode = "lazy",
        replacements: dict[int, int] | None = None,
        counter: int = 0,
        locked: bool = False,
    ) -> None:
        coeffs = [int(a) for a in coeffs]
        if n < 2 or not 1 <= t <= m:
            raise ConfigError(f"need n >= 2 and 1 <= t <= m (n={n}, m={m}, t={t})")
        if p > MAX_PRIME or not is_prime(p) or p % n != 1 or p <= m:
            raise ConfigError(f"p={p} must be a prime = 1 (mod {n}) above m={m}")
        if len(coeffs) != t or any(not 0 <= a < p for a in coeffs):
            raise ConfigError(f"need {t} coefficients in [0, {p})")
        if not 0 <= seed < 1 << 64:
            raise ConfigError("seed must fit in 64 bits")
        if mode not in _MODES:
            raise ConfigError(f"unknown mode {mode!r}")
        self.n, self.m, self.t, self.p = n, m, t, p
        self.coeffs = tuple(coeffs)
        self.seed = seed
        self.mode: Mode = mode
        self.counter = counter
        self.ops = 0
        self._lock = threading.Lock() if locked else None
        items = sorted((replacements or {}).items())
        if mode == "derived" and items:
            raise ConfigError("derived mode keeps no replacement store")
        if len(items) > t:
            raise ConfigError(f"replacement store has {len(items)} > t={t} entries")
        for x, v in items:
            if not 1 <= x <= m or not 1 <= v <= n:
                raise ConfigError(f"replacement ({x}, {v}) out of range")
            if self.gap(x) != 0:
                raise ConfigError(f"input {x} is not a bad input of this polynomial")
        self._keys = [x for x, _ in items]
        self._vals = [v for _, v in items]
        self.ops = 0

    @classmethod
    def new(
        cls,
        n: int,
        m: int,
        t: int,
        seed: int = 0,
        mode: Mode = "lazy",
        prime_mode: Literal["scan", "sample"] = "scan",
        exponent_cap: Fraction | int = 6,
        locked: bool = False,
    ) -> HashFunction:
        """Pick p = 1 (mod eta) above eta = n*ceil(m/n), then t uniform coefficients."""
        if n < 2 or not 2 <= t <= m:
            raise ConfigError(f"need n >= 2 and 2 <= t <= m (n={n}, m={m}, t={t})")
        eta = eta_for(n, m)
        p = prime_in_ap(
            PrimeSearchConfig(eta, 1, eta, exponent_cap, mode=prime_mode, seed=seed)
        )
        assert p % n == 1 and p > m
        counter = 0
        coeffs = []
        for _ in range(t):
            a, counter = _draw(seed, b"coef", 0, p, counter)
            coeffs.append(a)
        return cls(n, m, t, p, coeffs, seed, mode, counter=counter, locked=locked)

    # -- evaluation --------------------------------------------------------

    def gap(self, x: int) -> int:
        """h(x) - x**t mod p, by Horner on the coefficients (t multiply-adds)."""
        p = self.p
        acc = p - 1  # leading coefficient of -x**t
        for a in reversed(self.coeffs):
            acc = (acc * x + a) % p
            self.ops += 1
        return acc

    def _replacement(self, x: int) -> int:
        if self.mode == "derived":
            return _draw(self.seed, b"repl", x, self.n)[0] + 1
        i = bisect.bisect_left(self._keys, x)
        if i < len(self._keys) and self._keys[i] == x:
            return self._vals[i]
        u, self.counter = _draw(self.seed, b"lazy", 0, self.n, self.counter)
        assert len(self._keys) < self.t, "more than t bad inputs"
        self._keys.insert(i, x)
        self._vals.insert(i, u + 1)
        return u + 1

    def _eval(self, x: int) -> int:
        if not 1 <= x <= self.m:
            raise ValueError(f"input {x} outside [1, {self.m}]")
        if self.mode == "lazy":
            i = bisect.bisect_left(self._keys, x)
            if i < len(self._keys) and self._keys[i] == x:
                return self._vals[i]
        d = self.gap(x)
        if d == 0:
            return self._replacement(x)
        return 1 + (d + self.p - 1) % self.p % self.n

    def __call__(self, x: int) -> int:
        if self._lock is None:
            return self._eval(x)
        with self._lock:
            return self._eval(x)

    eval = __call__

    def eval_many(self, xs) -> np.ndarray:
        """Evaluate a batch; bad inputs are resolved in order of appearance."""
        xs = np.asarray(xs, dtype=np.int64)
        if xs.size and (xs.min() < 1 or xs.max() > self.m):
            raise ValueError(f"inputs must lie in [1, {self.m}]")
        d = kernels.hash_gap_batch(np.asarray(self.coeffs, dtype=np.int64), xs, self.p)
        out = 1 + (d + self.p - 1) % self.p % self.n
        bad = np.flatnonzero(d == 0)
        if len(bad):
            if self._lock is None:
                for j in bad:
                    out[j] = self._replacement(int(xs[j]))
            else:
                with self._lock:
                    for j in bad:
                        out[j] = self._replacement(int(xs[j]))
        return out

    @property
    def replacements(self) -> dict[int, int]:
        return dict(zip(self._keys, self._vals))

    def literal(self, x: int) -> int | None:
        """The non-bad output written as phi_{x^t}(h(x)); None at a bad input."""
        p = self.p
        y = sum(a * pow(x, i, p) for i, a in enumerate(self.coeffs)) % p
        bad = pow(x, self.t, p)
        if y == bad:
            return None
        return 1 + (((y + p - 1 - bad) % p) % self.n)

    # -- serialization -----------------------------------------------------

    def to_bytes(self) -> bytes:
        fields = [_FORMAT_VERSION, self.n, self.m, self.t, self.p, self.seed]
        fields.append(_MODES.index(self.mode))
        fields.extend(self.coeffs)
        fields.append(len(self._keys))
        # each stored pair is one varint (x-1)*n + (v-1)
        fields.extend((x - 1) * self.n + v - 1 for x, v in zip(self._keys, self._vals))
        fields.append(self.counter)
        return b"".join(_varint(f) for f in fields)

    @classmethod
    def from_bytes(cls, data: bytes) -> HashFunction:
        r = _Reader(data)
        version = r.next()
        if version != _FORMAT_VERSION:
            raise ConfigError(f"unsupported format version {version}")
        n, m, t, p, seed, mode_i = (r.next() for _ in range(6))
        if mode_i >= len(_MODES):
            raise ConfigError(f"unknown mode tag {mode_i}")
        if not 1 <= t <= m:
            raise ConfigError("malformed header")
        coeffs = [r.next() for _ in range(t)]
        size = r.next()
        if size > t:
            raise ConfigError(f"replacement store has {size} > t={t} entries")
        if n < 1:
            raise ConfigError("malformed header")
        pairs = [divmod(r.next(), n) for _ in range(size)]
        pairs = [(x + 1, v + 1) for x, v in pairs]
        keys = [x for x, _ in pairs]
        if keys != sorted(set(keys)):
            raise ConfigError("replacement keys must be strictly increasing")
        counter = r.next()
        r.finish()
        return cls(n, m, t, p, coeffs, seed, _MODES[mode_i], dict(pairs), counter)

    def _state(self):
        return (self.n, self.m, self.t, self.p, self.coeffs, self.seed, self.mode,
                self._keys, self._vals, self.counter)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HashFunction):
            return NotImplemented
        return self._state() == other._state()

    def __repr__(self) -> str:
        return (
            f"HashFunction(n={self.n}, m={self.m}, t={self.t}, p={self.p}, "
            f"mode={self.mode!r}, stored={len(self._keys)})"
        )


def hash_new(n: int, m: int, t: int, seed: int = 0, **kwargs) -> HashFunction:
    return HashFunction.new(n, m, t, seed, **kwargs)


def _varint(x: int) -> bytes:
    if x < 0:
        raise ValueError("varint encodes non-negative integers only")
    out = bytearray()
    while True:
        byte = x & 0x7F
        x >>= 7
        if x:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def next(self) -> int:
        x = shift = 0
        while True:
            if self.pos >= len(self.data):
                raise ConfigError("truncated hash encoding")
            byte = self.data[self.pos]
            self.pos += 1
            x |= (byte & 0x7F) << shift
            if not byte & 0x80:
                if byte == 0 and shift:
                    raise ConfigError("non-canonical varint")
                return x
            shift += 7
            if shift > 70:
                raise ConfigError("varint too long")

    def finish(self) -> None:
        if self.pos != len(self.data):
            raise ConfigError("trailing bytes after hash encoding")
