import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthash.errors import ConfigError, SearchExhaustedError
from orthash.primes import (
    PrimeSearchConfig,
    eta_for,
    factorize,
    is_prime,
    prime_in_ap,
    prime_power,
)

from oracles import is_prime_trial, sieve


def test_examples():
    assert is_prime(7)
    assert not is_prime(561)
    assert 561 == 3 * 11 * 17
    assert not is_prime(1)
    assert not is_prime(0)


def test_agrees_with_sieve_up_to_a_million():
    flags = sieve(10**6)
    mine = np.fromiter((is_prime(x) for x in range(10**6 + 1)), dtype=bool)
    assert (mine == flags).all()


@pytest.mark.parametrize(
    "x, expected",
    [
        (3215031751, False),  # strong pseudoprime to bases 2, 3, 5, 7
        (3825123056546413051, False),  # strong pseudoprime to the first 9 prime bases
        ((1 << 61) - 1, True),
        ((1 << 62) - 57, True),
        ((1 << 64) - 59, True),
        (18446744073709551557 * 1, True),
        (4611686014132420609, False),  # (2^31 - 1)^2
    ],
)
def test_hard_64_bit_inputs(x, expected):
    assert is_prime(x) is expected


def test_rejects_negative():
    with pytest.raises(ValueError):
        is_prime(-3)


@pytest.mark.parametrize(
    "eta, lower, expected", [(6, 4, 7), (4, 3, 5), (12, 8, 13), (6, 6, 7), (4, 4, 5)]
)
def test_scan_examples(eta, lower, expected):
    assert prime_in_ap(PrimeSearchConfig(eta, 1, lower)) == expected


@pytest.mark.parametrize("n, m, expected", [(6, 4, 6), (2, 3, 4), (5, 5, 5), (7, 7, 7), (3, 10, 12)])
def test_eta_for(n, m, expected):
    assert eta_for(n, m) == expected


@settings(max_examples=200, deadline=None)
@given(n=st.integers(2, 200), m=st.integers(2, 200))
def test_eta_properties_and_prime_choice(n, m):
    eta = eta_for(n, m)
    assert eta % n == 0 and m <= eta < m + n
    p = prime_in_ap(PrimeSearchConfig(eta, 1, eta))
    assert is_prime_trial(p)
    assert p % n == 1 and p > m


@settings(max_examples=200, deadline=None)
@given(
    eta=st.integers(2, 500),
    residue=st.integers(1, 500),
    lower=st.integers(0, 5000),
    mode=st.sampled_from(["scan", "sample"]),
    seed=st.integers(0, 2**32),
)
def test_output_contract(eta, residue, lower, mode, seed):
    from math import gcd

    if gcd(residue, eta) != 1:
        with pytest.raises(ConfigError):
            PrimeSearchConfig(eta, residue, lower)
        return
    if min(eta**6, (1 << 62) - 1) <= lower:
        with pytest.raises(ConfigError):
            PrimeSearchConfig(eta, residue, lower)
        return
    # keep sampled primes small enough for the trial-division oracle
    bound = lower + 2000 * eta if mode == "sample" else None
    cfg = PrimeSearchConfig(eta, residue, lower, mode=mode, seed=seed, upper_bound=bound)
    try:
        p = prime_in_ap(cfg)
    except SearchExhaustedError:
        first = lower + 1 + (residue - lower - 1) % eta
        assert not any(is_prime_trial(x) for x in range(first, cfg.upper + 1, eta))
        return
    assert p % eta == residue % eta and lower < p <= cfg.upper and is_prime_trial(p)
    if mode == "scan":
        first = lower + 1 + (residue - lower - 1) % eta
        assert not any(is_prime_trial(x) for x in range(first, p, eta))


def test_sample_mode_is_deterministic_per_seed():
    cfg = PrimeSearchConfig(1000, 1, 1000, mode="sample", seed=42)
    assert prime_in_ap(cfg) == prime_in_ap(cfg)
    draws = {prime_in_ap(PrimeSearchConfig(1000, 1, 1000, mode="sample", seed=s)) for s in range(5)}
    assert len(draws) > 1


def test_exhaustion_raises():
    # (63, 64] holds no odd number
    with pytest.raises(SearchExhaustedError):
        prime_in_ap(PrimeSearchConfig(2, 1, 63))
    with pytest.raises(SearchExhaustedError):
        prime_in_ap(PrimeSearchConfig(2, 1, 63, mode="sample"))
    # 1 mod 8 in (8, 17] -> {9, 17}; exponent cap 1.4 caps at floor(8^1.4) = 18
    assert prime_in_ap(PrimeSearchConfig(8, 1, 8, exponent_cap=1.4)) == 17


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(modulus=1),
        dict(modulus=6, residue=3),
        dict(modulus=4, lower=4096),  # empty interval
        dict(modulus=4, exponent_cap=0.5),
        dict(modulus=4, mode="bogus"),
    ],
)
def test_invalid_configs(kwargs):
    with pytest.raises(ConfigError):
        PrimeSearchConfig(**kwargs)


def test_rational_exponent_is_exact():
    from fractions import Fraction

    cfg = PrimeSearchConfig(10, 1, 0, exponent_cap=Fraction(3, 2))
    assert cfg.upper == 31  # floor(sqrt(1000))


def test_factorize_and_prime_power():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(12) is None
    assert prime_power(1) is None
