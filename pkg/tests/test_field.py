import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthash.errors import ConfigError
from orthash.field import FieldCtx, field_new

from oracles import is_prime_trial

SMALL_PRIMES = [p for p in range(2, 32) if is_prime_trial(p)]


def test_prime_field_has_no_modulus():
    F = field_new(7, 1)
    assert F.q == 7 and F.modulus is None and F.is_prime_field


def test_f4_modulus_is_the_only_irreducible_quadratic():
    # enumerate the four monic quadratics over F_2; only one has no root
    irreducible = [
        (c0, c1, 1)
        for c0, c1 in itertools.product(range(2), repeat=2)
        if all((c0 + c1 * x + x * x) % 2 for x in range(2))
    ]
    assert irreducible == [(1, 1, 1)]
    assert field_new(2, 2).modulus == (1, 1, 1)


@pytest.mark.parametrize("p, e", [(4, 1), (1, 1), (9, 2), (2, 0)])
def test_rejects_bad_parameters(p, e):
    with pytest.raises(ConfigError):
        field_new(p, e)


def test_rejects_overflow():
    with pytest.raises(ConfigError):
        field_new(2, 62)
    with pytest.raises(ConfigError):
        field_new((1 << 61) - 1, 2)


def test_rejects_reducible_modulus():
    with pytest.raises(ConfigError):
        FieldCtx(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over F_2


def test_basic_examples():
    F7 = field_new(7)
    assert F7.horner_eval([3, 2], 2) == 0
    assert all(F7.pow(x, 0) == 1 for x in range(7))
    assert field_new(5).inv(2) == 3
    with pytest.raises(ZeroDivisionError):
        F7.inv(0)


@pytest.mark.parametrize("p, e", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2)])
def test_extension_field_axioms_exhaustive(p, e):
    F = field_new(p, e)
    q = F.q
    elems = range(q)
    for a in elems:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.pow(a, q - 1) == 1
    for a, b, c in itertools.product(elems, repeat=3):
        if q > 9 and (a + b + c) % 3:
            continue  # keep the q=16, 25 cases quick
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


def test_extension_tables_match_ops():
    F = field_new(3, 2)
    add, mul = F.tables()
    for a, b in itertools.product(range(9), repeat=2):
        assert add[a, b] == F.add(a, b)
        assert mul[a, b] == F.mul(a, b)


@settings(max_examples=300, deadline=None)
@given(
    p=st.sampled_from(SMALL_PRIMES + [1_000_003, (1 << 61) - 1]),
    a=st.integers(0, 1 << 62),
    b=st.integers(0, 1 << 62),
    c=st.integers(0, 1 << 62),
)
def test_prime_field_axioms_against_bigint(p, a, b, c):
    F = field_new(p)
    a, b, c = a % p, b % p, c % p
    assert F.add(a, b) == (a + b) % p
    assert F.sub(a, b) == (a - b) % p
    assert F.mul(a, b) == (a * b) % p
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    if a:
        assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_horner_matches_power_sum(p):
    F = field_new(p)
    exhaustive = p <= 5
    for t in range(1, 6):
        vectors = (
            itertools.product(range(p), repeat=t)
            if exhaustive and t <= 4
            else ([(i * 7 + j * 13) % p for j in range(t)] for i in range(40))
        )
        for coeffs in vectors:
            for x in range(p):
                naive = sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p
                assert F.horner_eval(coeffs, x) == naive
