import itertools
import math
import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthash.codes import plan_rs
from orthash.errors import ConfigError
from orthash.hash import HashFunction, _varint, hash_new
from orthash.oa import build_oa
from orthash.primes import PrimeSearchConfig, eta_for, prime_in_ap

HEADER_BYTES = 20  # version, n, m, t, p, 64-bit seed, mode, |D|, counter


def adversarial(n, m, t, roots, **kw):
    """h with h(x) - x^t = -prod(x - r): every root is a bad input."""
    p = prime_in_ap(PrimeSearchConfig(eta_for(n, m), 1, eta_for(n, m)))
    poly = [1]  # prod(x - r), lowest degree first
    for r in roots:
        poly = [(a - r * b) % p for a, b in zip([0] + poly, poly + [0])]
    # x^t - prod(x - r) has degree < t
    coeffs = [(-c) % p for c in poly[:t]]
    return HashFunction(n, m, t, p, coeffs, **kw)


def test_primes_for_examples():
    assert hash_new(6, 4, 2, seed=1).p == 7
    assert hash_new(2, 3, 2, seed=1).p == 5


def test_eval_examples():
    h = HashFunction(6, 4, 2, 7, [3, 2], seed=9)
    assert h(2) == 3
    assert h(1) == 4
    first = h(3)
    assert 1 <= first <= 6 and h.replacements == {3: first}
    assert h(3) == first
    assert h.literal(3) is None and h.literal(2) == 3


def test_out_of_range_input():
    h = hash_new(6, 4, 2)
    for x in (0, 5):
        with pytest.raises(ValueError):
            h(x)
    with pytest.raises(ValueError):
        h.eval_many([1, 5])


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=1, m=4, t=2, p=7, coeffs=[0, 0]),
        dict(n=6, m=4, t=2, p=11, coeffs=[0, 0]),  # 11 != 1 mod 6
        dict(n=6, m=8, t=2, p=7, coeffs=[0, 0]),  # p <= m
        dict(n=6, m=4, t=2, p=7, coeffs=[0, 7]),
        dict(n=6, m=4, t=2, p=7, coeffs=[0]),
        dict(n=6, m=4, t=2, p=7, coeffs=[0, 0], mode="other"),
        dict(n=6, m=4, t=2, p=7, coeffs=[3, 2], replacements={2: 1}),  # 2 is not bad
        dict(n=6, m=4, t=2, p=7, coeffs=[3, 2], replacements={3: 7}),
    ],
)
def test_constructor_validation(kwargs):
    with pytest.raises(ConfigError):
        HashFunction(**kwargs)


def test_adversarial_polynomial_fills_store_to_t():
    roots = [2, 5, 7, 11, 13]
    h = adversarial(4, 16, 5, roots, seed=3)
    for x in range(1, 17):
        h(x)
    assert sorted(h.replacements) == roots
    assert len(h.replacements) == h.t


@settings(max_examples=200, deadline=None)
@given(
    n=st.integers(2, 12),
    m=st.integers(2, 64),
    seed=st.integers(0, 2**64 - 1),
    data=st.data(),
)
def test_store_never_exceeds_t(n, m, seed, data):
    t = data.draw(st.integers(2, min(m, 8)))
    h = hash_new(n, m, t, seed=seed)
    for x in range(1, m + 1):
        h(x)
        assert len(h.replacements) <= t
    bad = [x for x in range(1, m + 1) if h.literal(x) is None]
    assert sorted(h.replacements) == bad


def test_exactly_t_multiply_adds():
    for t in (2, 3, 5, 8):
        h = hash_new(6, 40, t, seed=t)
        good = next(x for x in range(1, 41) if h.literal(x) is not None)
        h.ops = 0
        h(good)
        assert h.ops == t
        h.ops = 0
        h(good)
        assert h.ops == t


def test_cached_bad_input_skips_polynomial():
    h = adversarial(4, 16, 3, [2, 5, 9], seed=0)
    h(5)
    h.ops = 0
    h(5)
    assert h.ops == 0


@settings(max_examples=100, deadline=None)
@given(n=st.integers(2, 8), m=st.integers(2, 30), seed=st.integers(0, 2**32), data=st.data())
def test_matches_literal_formula(n, m, seed, data):
    t = data.draw(st.integers(2, min(m, 5)))
    h = hash_new(n, m, t, seed=seed)
    for x in range(1, m + 1):
        lit = h.literal(x)
        if lit is not None:
            assert h(x) == lit


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), order=st.randoms(use_true_random=False))
def test_order_independence(seed, order):
    xs = list(range(1, 21))
    base = adversarial(3, 20, 4, [1, 4, 9, 16], seed=seed)
    blob = base.to_bytes()
    a = HashFunction.from_bytes(blob)
    forward = {x: a(x) for x in xs}
    order.shuffle(xs)
    b = HashFunction.from_bytes(blob)
    shuffled = {x: b(x) for x in xs}
    # the replacement stream is consumed in order of first sight, so the
    # mapping is order-independent once the store is populated
    c = HashFunction.from_bytes(a.to_bytes())
    assert {x: c(x) for x in xs} == forward
    good = [x for x in xs if base.literal(x) is not None]
    assert all(forward[x] == shuffled[x] for x in good)


def test_derived_mode_is_order_independent_and_stateless():
    a = adversarial(3, 20, 4, [1, 4, 9, 16], seed=11, mode="derived")
    b = adversarial(3, 20, 4, [1, 4, 9, 16], seed=11, mode="derived")
    fa = [a(x) for x in range(1, 21)]
    fb = [b(x) for x in range(20, 0, -1)][::-1]
    assert fa == fb
    assert a.replacements == {} and a.to_bytes() == b.to_bytes()
    assert a.to_bytes() == adversarial(3, 20, 4, [1, 4, 9, 16], seed=11, mode="derived").to_bytes()


def test_eval_many_matches_scalar():
    a = adversarial(5, 30, 4, [3, 8, 20, 29], seed=5)
    b = adversarial(5, 30, 4, [3, 8, 20, 29], seed=5)
    xs = [30, 3, 1, 8, 8, 20, 2, 29, 3]
    assert a.eval_many(xs).tolist() == [b(x) for x in xs]
    assert a == b


@settings(max_examples=1000, deadline=None)
@given(
    n=st.integers(2, 50),
    m=st.integers(2, 200),
    seed=st.integers(0, 2**64 - 1),
    mode=st.sampled_from(["lazy", "derived"]),
    data=st.data(),
)
def test_serialization_round_trip(n, m, seed, mode, data):
    t = data.draw(st.integers(2, min(m, 10)))
    h = hash_new(n, m, t, seed=seed, mode=mode)
    for x in data.draw(st.lists(st.integers(1, m), max_size=20)):
        h(x)
    blob = h.to_bytes()
    g = HashFunction.from_bytes(blob)
    assert g == h and g.to_bytes() == blob
    assert [g(x) for x in range(1, m + 1)] == [h(x) for x in range(1, m + 1)]


def _encode(fields):
    return b"".join(_varint(f) for f in fields)


def test_deserialize_rejects_oversized_store():
    h = adversarial(4, 16, 2, [3, 6], seed=0)
    h(3), h(6)
    blob = h.to_bytes()
    assert HashFunction.from_bytes(blob) == h
    fields = [1, 4, 16, 2, h.p, 0, 0, *h.coeffs, 3, 2 * 4, 5 * 4, 8 * 4, h.counter]
    with pytest.raises(ConfigError):
        HashFunction.from_bytes(_encode(fields))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda b: b[:-1],  # truncated
        lambda b: b + b"\x00",  # trailing
        lambda b: b"\x02" + b[1:],  # version
        lambda b: b[:1] + b"\x86\x00" + b[2:],  # non-canonical varint for n
    ],
)
def test_deserialize_rejects_malformed(mutate):
    blob = HashFunction(6, 4, 2, 7, [3, 2]).to_bytes()
    with pytest.raises(ConfigError):
        HashFunction.from_bytes(mutate(blob))


def test_deserialize_rejects_unsorted_and_fake_bad_keys():
    h = adversarial(4, 16, 2, [3, 6], seed=0)
    base = [1, 4, 16, 2, h.p, 0, 0, *h.coeffs]
    with pytest.raises(ConfigError):
        HashFunction.from_bytes(_encode(base + [2, 5 * 4, 2 * 4, 0]))
    with pytest.raises(ConfigError):
        HashFunction.from_bytes(_encode(base + [1, 3 * 4, 0]))


def _size_ratio(h):
    bits = 8 * len(h.to_bytes())
    return bits / (h.t * (math.ceil(math.log2(h.p)) + math.ceil(math.log2(h.n * h.m))))


def _varint_bytes(x):
    return max(1, math.ceil(x.bit_length() / 7))


@pytest.mark.parametrize(
    "n, m, t", [(2, 64, 32), (10, 500, 32), (1000, 10**6, 16), (3, 40, 32), (6, 100, 48)]
)
def test_encoded_size_constant_for_large_t(n, m, t):
    # worst case: full store and a seed that needs the longest varint
    roots = list(range(1, t + 1))
    h = adversarial(n, m, t, roots, seed=2**64 - 1)
    for x in roots:
        h(x)
    assert len(h.replacements) == t
    assert _size_ratio(h) <= 2


@settings(max_examples=200, deadline=None)
@given(n=st.integers(2, 1000), m=st.integers(2, 10**5), seed=st.integers(0, 2**64 - 1), data=st.data())
def test_encoded_size_is_linear_in_t(n, m, seed, data):
    t = data.draw(st.integers(2, min(m, 12)))
    roots = data.draw(st.lists(st.integers(1, m), min_size=t, max_size=t, unique=True))
    h = adversarial(n, m, t, roots, seed=seed)
    for x in roots:
        h(x)
    per_t = _varint_bytes(h.p - 1) + _varint_bytes(n * m - 1)
    assert len(h.to_bytes()) <= HEADER_BYTES + t * per_t


def test_hash_values_are_rows_of_the_array():
    # each (polynomial, replacement fill) gives the row of the RS array with
    # coefficient vector (a_0, a_1) and the same fill at its bad positions
    n, m, t = 6, 4, 2
    plan = plan_rs(n, m, t)
    A = build_oa(plan).entries
    rows = {tuple(r) for r in A.tolist()}
    for a0, a1 in itertools.product(range(7), repeat=2):
        h = HashFunction(n, m, t, 7, [a0, a1], seed=a0 * 7 + a1)
        vec = tuple(h(x) for x in range(1, m + 1))
        assert vec in rows
        block = A[(a0 * 7 + a1) * 36 : (a0 * 7 + a1 + 1) * 36]
        assert vec in {tuple(r) for r in block.tolist()}


def test_locked_instance_is_thread_safe():
    h = adversarial(4, 16, 4, [1, 2, 3, 4], seed=1, locked=True)
    ref = adversarial(4, 16, 4, [1, 2, 3, 4], seed=1)
    results = []

    def worker():
        results.append([h(x) for x in range(1, 17)])

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert len(h.replacements) == 4
    assert all(r == results[0] for r in results)
    good = [ref(x) for x in range(5, 17)]
    assert results[0][4:] == good


def test_new_is_deterministic():
    assert hash_new(6, 20, 3, seed=4) == hash_new(6, 20, 3, seed=4)
    assert hash_new(6, 20, 3, seed=4).coeffs != hash_new(6, 20, 3, seed=5).coeffs
    s = hash_new(6, 20, 3, seed=4, prime_mode="sample")
    assert s.p % 6 == 1 and s.p > 20
