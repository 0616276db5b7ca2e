from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from regulator_lab.arith import (DomainError, PadicNumber, PrecisionError, binomial,
                                 factorial_multi, is_prime, legendre_factorial_valuation,
                                 mahler_binomial, multi_indices, padic_log, valuation)

primes = st.sampled_from([3, 5, 7, 11])


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_valuation_of_rationals():
    assert valuation(250, 5) == 3
    assert valuation(Fraction(7, 25), 5) == -2
    assert valuation(0, 5) == float("inf")


@pytest.mark.parametrize("n,p", [(10, 2), (25, 5), (100, 3), (0, 7), (124, 5)])
def test_legendre_matches_direct_count(n, p):
    direct = sum(valuation(k, p) for k in range(1, n + 1))
    assert legendre_factorial_valuation(n, p) == direct


def test_padic_from_rational_roundtrip():
    x = PadicNumber.from_rational(Fraction(3, 7), 5, 6)
    assert x.valuation == 0
    assert (x * 7 - 3).is_zero()
    y = PadicNumber.from_rational(Fraction(50, 3), 5, 4)
    assert y.valuation == 2 and y.absprec == 6


def test_padic_precision_tracking():
    a = PadicNumber.from_rational(1, 5, 3)       # known mod 5^3
    b = PadicNumber.from_rational(25, 5, 10)     # known mod 5^12
    assert (a + b).absprec == 3
    assert (b * b).valuation == 4
    assert (a / 5).valuation == -1


def test_padic_zero_addition_keeps_precision():
    z = PadicNumber.zero(5, 10 ** 6)
    x = PadicNumber.from_rational(7, 5, 4)
    assert (z + x).absprec == 4
    assert (x + z) == x


@given(primes, st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_padic_ring_laws(p, a, b):
    x = PadicNumber.from_rational(a, p, 8)
    y = PadicNumber.from_rational(b, p, 8)
    assert (x + y).agrees_with(a + b)
    assert (x * y).agrees_with(a * b)
    assert ((x - y) + y).agrees_with(x)


def test_log_of_one_plus_p():
    # log(1+5) = 5 - 25/2 + 125/3 - ... ; valuation 1
    L = padic_log(6, 5, 6)
    assert L.valuation == 1
    exact = sum(Fraction((-1) ** (a - 1) * 5 ** a, a) for a in range(1, 40))
    assert L.agrees_with(exact)


@given(primes, st.integers(0, 10 ** 4), st.integers(0, 10 ** 4))
@settings(max_examples=60, deadline=None)
def test_log_is_a_homomorphism(p, a, b):
    u, v = 1 + p * a, 1 + p * b
    m = 6
    lhs = padic_log(u * v, p, m)
    rhs = padic_log(u, p, m) + padic_log(v, p, m)
    assert (lhs - rhs).is_zero()


def test_log_domain_and_precision_errors():
    with pytest.raises(DomainError):
        padic_log(2, 5, 6)
    u = PadicNumber.from_rational(6, 5, 2)     # 1 + 5 known mod 5^2
    with pytest.raises(PrecisionError):
        padic_log(u, prec=5)


def test_binomial_and_mahler():
    assert binomial(7, 3) == comb(7, 3)
    assert binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert binomial(-1, 4) == 1
    assert mahler_binomial([5, 4], (2, 1)) == comb(5, 2) * 4


def test_multi_indices_count_and_order():
    idx = multi_indices(2, 3)
    assert len(idx) == comb(5, 2)
    assert idx[0] == (0, 0)
    assert [sum(a) for a in idx] == sorted(sum(a) for a in idx)
    assert factorial_multi((3, 2)) == 12
