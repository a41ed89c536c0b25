from fractions import Fraction

import pytest
from hypothesis import given

from algred.scalars import HBAR, I, ONE, ZERO, Scalar, scalar_gcd
from strategies import scalars


def test_zero_is_unique():
    a = Scalar.of(3, 2) * HBAR
    assert a - a == ZERO
    assert (a - a)._c == {}
    assert Scalar.of(0, 0) == ZERO


def test_fractions_in_lowest_terms():
    a = Scalar.of(Fraction(4, 8), Fraction(-6, 4))
    re, im = a.constant_term()
    assert (re.numerator, re.denominator) == (1, 2)
    assert (im.numerator, im.denominator) == (-3, 2)


def test_gaussian_product_and_inverse():
    a = Scalar.of(1, 2)
    b = Scalar.of(3, -1)
    assert a * b == Scalar.of(5, 5)
    assert a * a.inverse() == ONE
    assert I * I == -ONE


def test_printing():
    assert str(Scalar.of(Fraction(3, 2))) == "3/2"
    assert str(I) == "i"
    assert str(-I) == "-i"
    assert str(Scalar.of(Fraction(1, 2), 1)) == "(1/2+i)"
    assert str(-(I * HBAR)) == "-i*hbar"
    assert str(HBAR ** 2) == "hbar^2"


def test_non_unit_inverse_rejected():
    with pytest.raises(ZeroDivisionError):
        (ONE + HBAR).inverse()


def test_hbar_long_division():
    a = (HBAR + 1) * (HBAR * Scalar.of(2) - I)
    assert a.exact_div(HBAR + 1) == HBAR * Scalar.of(2) - I
    q, r = (HBAR ** 2 + 1).divmod(HBAR + 1)
    assert q * (HBAR + 1) + r == HBAR ** 2 + 1
    assert r.degree() < 1


def test_gcd_is_monic():
    g = scalar_gcd((HBAR + 1) * (HBAR - 2), (HBAR + 1) * Scalar.of(3, 1))
    assert g == HBAR + 1


@given(scalars(), scalars(), scalars())
def test_ring_laws(a, b, c):
    assert (a + b) - b == a
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a * b).conj() == a.conj() * b.conj()
