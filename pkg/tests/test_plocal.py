import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pstiefel.errors import DomainError
from pstiefel.plocal import (
    INF,
    LocalScalar,
    adams_m_valuation,
    binomial,
    complete_symmetric_sum,
    factorial_valuation,
    in_zp,
    is_odd_prime,
    odd_primes_upto,
    p_valuation,
    vp,
)

PRIMES = [3, 5, 7, 11, 13]


def test_binomial_examples():
    assert binomial(5, 3) == 10
    assert binomial(7, 7) == 1
    assert binomial(9, 4) == 126


def test_binomial_rejects_j_above_n():
    with pytest.raises(DomainError):
        binomial(3, 4)


def test_pascal_up_to_64():
    for n in range(1, 65):
        for j in range(1, n):
            assert binomial(n, j) == binomial(n - 1, j - 1) + binomial(n - 1, j)


def test_big_binomial_is_exact():
    assert binomial(64, 32) == 1832624140942590534
    assert binomial(64, 32) > 2**60


def test_valuation_examples():
    assert p_valuation(LocalScalar(10, 5)) == 1
    assert p_valuation(LocalScalar(Fraction(1, 6), 5)) == 0
    assert p_valuation(LocalScalar(0, 7)) == INF
    assert vp(Fraction(3, 25), 5) == -2


def test_local_scalar_is_reduced():
    s = LocalScalar(Fraction(10, 4), 3)
    assert (s.numerator, s.denominator) == (5, 2)
    assert s.is_local() and s.is_unit()
    assert not LocalScalar(Fraction(1, 3), 3).is_local()


def test_scalar_prime_mismatch():
    with pytest.raises(DomainError):
        LocalScalar(1, 3) + LocalScalar(1, 5)


@given(
    st.fractions(max_denominator=500).filter(lambda q: q != 0),
    st.fractions(max_denominator=500).filter(lambda q: q != 0),
    st.sampled_from(PRIMES),
)
def test_valuation_is_a_valuation(a, b, p):
    assert vp(a * b, p) == vp(a, p) + vp(b, p)
    assert vp(a + b, p) >= min(vp(a, p), vp(b, p))


def test_inf_above_integers():
    assert INF > 10**9
    assert min(INF, 3) == 3


def test_complete_symmetric_examples():
    assert complete_symmetric_sum((1, 1), 2) == 3
    assert complete_symmetric_sum((1, 2), 2) == 7
    assert complete_symmetric_sum((4, -3, 2), 0) == 1


def _brute_h(ell, j):
    total = 0
    for idx in itertools.product(range(j + 1), repeat=len(ell)):
        if sum(idx) == j:
            total += math.prod(l**i for l, i in zip(ell, idx))
    return total


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4), st.integers(0, 8))
def test_complete_symmetric_matches_bruteforce(ell, j):
    assert complete_symmetric_sum(tuple(ell), j) == _brute_h(ell, j)


def test_complete_symmetric_needs_entries():
    with pytest.raises(DomainError):
        complete_symmetric_sum((), 2)


def test_adams_examples():
    assert adams_m_valuation(3, 5) == 0
    assert adams_m_valuation(4, 5) == 1
    assert adams_m_valuation(0, 7) == 0


@pytest.mark.parametrize("p", PRIMES)
def test_adams_zero_iff_below_p_minus_1(p):
    for r in range(0, 5 * p):
        assert (adams_m_valuation(r, p) == 0) == (r < p - 1)


@pytest.mark.parametrize("p", PRIMES)
def test_legendre_against_factorial(p):
    for i in range(0, 60):
        assert factorial_valuation(i, p) == vp(math.factorial(i), p)


def test_primes():
    assert odd_primes_upto(13) == [3, 5, 7, 11, 13]
    assert not is_odd_prime(2) and not is_odd_prime(9) and is_odd_prime(61)
    assert in_zp(Fraction(1, 6), 5) and not in_zp(Fraction(1, 10), 5)
