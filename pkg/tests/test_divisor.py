import math
from fractions import Fraction

import pytest
from hypothesis import given

from ellgcd.divisor import (
    INFINITY,
    DivisorP1,
    Place,
    common_basis,
    coprime_refine,
    divisor_degree,
    divisor_max,
    divisor_min,
    divisor_of,
    weil_height_q,
)
from ellgcd.errors import DegenerateInput, NotEffective
from ellgcd.polynomial import poly_gcd
from ellgcd.ratfunc import RationalFunction

from conftest import T, nonzero_polys, poly


def D(*pairs, inf=0):
    return DivisorP1(list(pairs), inf)


class TestPlacesAndValidation:
    def test_infinity_sorts_last(self):
        assert sorted([INFINITY, Place(T)]) == [Place(T), INFINITY]

    def test_rejects_non_monic(self):
        with pytest.raises(ValueError):
            DivisorP1([(2 * T, 1)])

    def test_rejects_non_squarefree(self):
        with pytest.raises(ValueError):
            DivisorP1([(T ** 2, 1)])

    def test_rejects_shared_factors(self):
        with pytest.raises(ValueError):
            DivisorP1([(T ** 2 - 1, 1), (T - 1, 2)])

    def test_equality_is_basis_independent(self):
        assert D((T ** 2 - 1, 2)) == D((T - 1, 2), (T + 1, 2))
        assert hash(D((T ** 2 - 1, 2))) == hash(D((T - 1, 2), (T + 1, 2)))
        assert D((T ** 2 - 1, 2)) != D((T - 1, 2), (T + 1, 1))


class TestDegree:
    def test_examples(self):
        assert divisor_degree(D((T, 2), inf=1)) == 3
        assert divisor_degree(DivisorP1.zero()) == 0
        assert divisor_degree(D((T ** 2 + 1, 1))) == 2


class TestDivisorOf:
    def test_examples(self):
        f = RationalFunction(2 * T ** 2, T ** 3 + 8)
        assert divisor_of(f) == D((T, 2), (T ** 3 + 8, -1), inf=1)
        assert divisor_of(poly(5)) == DivisorP1.zero()
        assert divisor_of(T) == D((T, 1), inf=-1)

    def test_zero(self):
        with pytest.raises(DegenerateInput):
            divisor_of(poly())

    @given(nonzero_polys(4), nonzero_polys(3), nonzero_polys(4), nonzero_polys(3))
    def test_homomorphism(self, a, b, c, d):
        f, g = RationalFunction(a, b), RationalFunction(c, d)
        assert divisor_of(f * g) == divisor_of(f) + divisor_of(g)
        assert divisor_of(f.inverse()) == -divisor_of(f)
        assert divisor_of(f).degree == 0


class TestRefinement:
    def test_split(self):
        out = coprime_refine([divisor_of(T ** 2 - 1), divisor_of(T - 1)])
        basis, _, _ = common_basis(out)
        assert set(basis) == {T - 1, T + 1}

    def test_single_unchanged(self):
        d = D((T, 1), inf=2)
        assert coprime_refine([d]) == [d]

    def test_multiplicities(self):
        basis, rows, _ = common_basis([divisor_of(T ** 2 * (T + 2)), divisor_of(T ** 3)])
        table = dict(zip(basis, zip(*rows)))
        assert table == {T: (2, 3), T + 2: (1, 0)}

    @given(nonzero_polys(4), nonzero_polys(4), nonzero_polys(3))
    def test_preserves_divisors(self, a, b, c):
        divs = [divisor_of(a * c), divisor_of(b * c ** 2)]
        refined = coprime_refine(divs)
        assert refined == divs
        basis, rows, _ = common_basis(refined)
        for i in range(len(basis)):
            for j in range(i):
                assert poly_gcd(basis[i], basis[j]) == poly(1)
        for f, row in zip((a * c, b * c ** 2), rows):
            prod = poly(f.leading_coefficient)
            for base, m in zip(basis, row):
                prod = prod * base ** m
            assert prod == f


class TestMinMax:
    def test_examples(self):
        d1 = D((T, 2), (T - 1, 1))
        d2 = D((T, 1), (T + 1, 3))
        assert divisor_min(d1, d2) == D((T, 1))
        assert divisor_min(d1, DivisorP1.zero()) == DivisorP1.zero()
        assert divisor_min(d1, d1) == d1

    def test_not_effective(self):
        with pytest.raises(NotEffective):
            divisor_min(D((T, -1)), D((T, 1)))

    def test_bounding_sup(self):
        assert divisor_max([DivisorP1.at_infinity(1), DivisorP1.at_infinity(2)]) == DivisorP1.at_infinity(2)
        assert divisor_max([D((T, 1)), D((T - 1, 1))]) == D((T, 1), (T - 1, 1))

    @given(nonzero_polys(5), nonzero_polys(5))
    def test_lattice_laws(self, a, b):
        d1, d2 = divisor_of(a), divisor_of(b)
        d1 = DivisorP1(d1.finite_part, 0)
        d2 = DivisorP1(d2.finite_part, 1)
        m = divisor_min(d1, d2)
        assert m == divisor_min(d2, d1)
        assert m.is_effective()
        assert m.degree <= min(d1.degree, d2.degree)
        assert m <= d1 and m <= d2
        # finite part of min is the gcd of the polynomials
        assert m.finite_polynomial() == poly_gcd(a, b)


class TestWeilHeight:
    def test_examples(self):
        assert weil_height_q(Fraction(3, 2)) == pytest.approx(math.log(3))
        assert weil_height_q(0) == 0
        assert weil_height_q(7) == pytest.approx(math.log(7))
        assert weil_height_q(None) == 0
