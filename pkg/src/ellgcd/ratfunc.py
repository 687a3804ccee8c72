"""Rational functions in Q(t) kept in lowest terms with a monic denominator."""
from __future__ import annotations

from fractions import Fraction

from .errors import DegenerateInput
from .polynomial import RationalPolynomial, as_fraction, poly_gcd

__all__ = ["RationalFunction"]

_ONE_POLY = RationalPolynomial([1])


def _is_one(p: RationalPolynomial) -> bool:
    return p.primitive_part == (1,) and p.content == 1


def _gcd_or_one(f, g):
    if f.is_constant() or g.is_constant():
        return _ONE_POLY
    return poly_gcd(f, g)


class RationalFunction:
    """Element ``num/den`` of Q(t) with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, _reduced: bool = False):
        if not isinstance(num, RationalPolynomial):
            num = RationalPolynomial([num])
        if den is None:
            den = _ONE_POLY
        elif not isinstance(den, RationalPolynomial):
            den = RationalPolynomial([den])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = RationalPolynomial(), _ONE_POLY
        elif not _reduced:
            g = _gcd_or_one(num, den)
            if not g.is_constant():
                num = num.exact_div(g)
                den = den.exact_div(g)
        lc = den.leading_coefficient
        if lc != 1:
            num = num.scale(1 / lc)
            den = den.monic()
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_coeffs(cls, num_coeffs, den_coeffs=(1,)) -> "RationalFunction":
        return cls(RationalPolynomial(num_coeffs), RationalPolynomial(den_coeffs))

    @classmethod
    def _make(cls, num, den):
        return cls(num, den, _reduced=True)

    # -- inspection --
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    @property
    def degree(self) -> int:
        """max(deg num, deg den); the Weil height of the function on P^1."""
        return max(len(self.num.primitive_part), len(self.den.primitive_part)) - 1 if self.num else 0

    def ord_infinity(self) -> int:
        """Order of vanishing at t = infinity (deg den - deg num)."""
        if self.num.is_zero():
            raise DegenerateInput("order of the zero function")
        return self.den.degree - self.num.degree

    def __call__(self, r) -> Fraction:
        r = as_fraction(r)
        d = self.den(r)
        if d == 0:
            raise ZeroDivisionError(f"pole at t = {r}")
        return self.num(r) / d

    # -- arithmetic --
    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, RationalPolynomial):
            return RationalFunction._make(other, _ONE_POLY)
        try:
            return RationalFunction._make(RationalPolynomial([other]), _ONE_POLY)
        except TypeError:
            return NotImplemented

    def __neg__(self):
        return RationalFunction._make(-self.num, self.den)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if _is_one(b) and _is_one(d):
            return RationalFunction._make(a + c, _ONE_POLY)
        if _is_one(d):
            return RationalFunction._make(a + c * b, b)
        if _is_one(b):
            return RationalFunction._make(a * d + c, d)
        g = _gcd_or_one(b, d)
        if g.is_constant():
            return RationalFunction._make(a * d + c * b, b * d)
        b1 = b.exact_div(g)
        d1 = d.exact_div(g)
        top = a * d1 + c * b1
        if top.is_zero():
            return RationalFunction(RationalPolynomial())
        g2 = _gcd_or_one(top, g)
        if not g2.is_constant():
            top = top.exact_div(g2)
            g = g.exact_div(g2)
        return RationalFunction._make(top, b1 * d1 * g)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RationalFunction(RationalPolynomial())
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = _gcd_or_one(a, d)
        g2 = _gcd_or_one(c, b)
        if not g1.is_constant():
            a, d = a.exact_div(g1), d.exact_div(g1)
        if not g2.is_constant():
            c, b = c.exact_div(g2), b.exact_div(g2)
        return RationalFunction._make(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction._make(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RationalFunction._make(self.num ** e, self.den ** e)

    # -- comparison --
    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __reduce__(self):
        return (RationalFunction._make, (self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self):
        if _is_one(self.den):
            return str(self.num)
        return f"({self.num})/({self.den})"
