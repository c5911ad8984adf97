from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slopekit.rational import fmt_q, parse_q
from slopekit.valuation import INF, Prime, is_prime, unit_part, vp, vp_fraction, vp_rational

from oracles import vp_loop

PRIMES = st.sampled_from([2, 3, 5, 7, 11, 101])


def test_examples():
    assert vp(12, 2) == 2
    assert vp(-27, 3) == 3
    assert vp(7, 3) == 0
    assert vp(0, 5) == INF
    assert vp(2**200, 2) == 200
    assert vp(3**500 * 7, 3) == 500


def test_rational():
    assert vp_rational(9, 2, 3) == 2
    assert vp_rational(2, 9, 3) == -2
    assert vp_rational(0, 5, 3) == INF
    assert vp_fraction(Fraction(50, 3), 5) == 2
    with pytest.raises(ZeroDivisionError):
        vp_rational(1, 0, 3)


def test_prime_validation():
    assert Prime(101) == 101
    for bad in (0, 1, 4, 91, -3):
        with pytest.raises(ValueError):
            Prime(bad)
    with pytest.raises(TypeError):
        Prime(3.0)
    with pytest.raises(TypeError):
        Prime(True)


def test_is_prime_matches_sieve():
    N = 2000
    sieve = [True] * N
    sieve[0] = sieve[1] = False
    for i in range(2, N):
        if sieve[i]:
            for j in range(i * i, N, i):
                sieve[j] = False
    assert [n for n in range(N) if is_prime(n)] == [n for n in range(N) if sieve[n]]
    assert is_prime(2**61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


@given(st.integers(min_value=-(10**60), max_value=10**60).filter(bool), PRIMES)
def test_vp_matches_loop(z, p):
    assert vp(z, p) == vp_loop(z, p)


@given(st.integers().filter(bool), st.integers().filter(bool), PRIMES)
def test_vp_multiplicative(a, b, p):
    assert vp(a * b, p) == vp(a, p) + vp(b, p)


@given(st.integers(), st.integers(), PRIMES)
def test_vp_ultrametric(a, b, p):
    assert vp(a + b, p) >= min(vp(a, p), vp(b, p))


@given(st.integers().filter(bool), PRIMES)
def test_unit_part(z, p):
    u = unit_part(z, p)
    assert u % p != 0 and u * p ** vp(z, p) == z


@given(st.fractions())
def test_rational_roundtrip(q):
    assert parse_q(fmt_q(q)) == q


def test_rational_format():
    assert fmt_q(Fraction(3, 2)) == "3/2"
    assert fmt_q(2) == "2/1"
    assert fmt_q(INF) == "inf" and parse_q("inf") == INF
    assert parse_q("7") == 7
