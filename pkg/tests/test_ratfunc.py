from fractions import Fraction

import pytest
from hypothesis import given

from ellgcd.errors import DegenerateInput
from ellgcd.ratfunc import RationalFunction

from conftest import T, nonzero_polys, poly, polys


def test_reduced_with_monic_denominator():
    f = RationalFunction(2 * (T ** 2 - 1), 4 * (T - 1))
    assert f.den == poly(1)
    assert f.num == (T + 1) * Fraction(1, 2)
    assert f == RationalFunction(T + 1, poly(2))


def test_zero_is_canonical():
    z = RationalFunction(poly(), T + 5)
    assert z.is_zero() and z.den == poly(1)


def test_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        RationalFunction(T, poly())


def test_ord_infinity():
    assert RationalFunction(T ** 2, T ** 3 + 8).ord_infinity() == 1
    assert RationalFunction(T).ord_infinity() == -1
    with pytest.raises(DegenerateInput):
        RationalFunction(poly()).ord_infinity()


def test_pole_evaluation():
    f = RationalFunction(poly(1), T - 2)
    assert f(Fraction(3)) == 1
    with pytest.raises(ZeroDivisionError):
        f(2)


@given(polys(4), nonzero_polys(3), polys(4), nonzero_polys(3), nonzero_polys(3))
def test_field_axioms(a, b, c, d, e):
    x, y, z = RationalFunction(a, b), RationalFunction(c, d), RationalFunction(e, b)
    assert (x + y) * z == x * z + y * z
    assert x - x == RationalFunction(poly())
    if not z.is_zero():
        assert (x / z) * z == x
        assert z * z.inverse() == RationalFunction(poly(1))
        assert z ** -2 == (z * z).inverse()
