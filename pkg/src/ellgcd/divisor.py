"""Divisors on the projective t-line over a coprime polynomial basis.

A finite place is a monic squarefree polynomial: it stands for the set of its
complex roots, so a single entry may bundle several Galois orbits.  Divisors
never factor over Q; whenever two divisors have to be compared they are first
rewritten over a shared gcd-free basis.
"""
from __future__ import annotations

import math
from functools import total_ordering
from typing import Iterable, Mapping, Sequence

from .errors import DegenerateInput, NotEffective
from .polynomial import RationalPolynomial, as_fraction, poly_gcd, squarefree_decompose
from .ratfunc import RationalFunction

__all__ = [
    "Place",
    "INFINITY",
    "DivisorP1",
    "common_basis",
    "coprime_refine",
    "divisor_of",
    "divisor_min",
    "divisor_max",
    "divisor_degree",
    "weil_height_q",
]


@total_ordering
class Place:
    """A finite place (monic squarefree polynomial) or the place at infinity."""

    __slots__ = ("poly",)

    def __init__(self, poly: RationalPolynomial | None = None):
        if poly is not None:
            if poly.is_constant():
                raise ValueError("a finite place needs a polynomial of degree >= 1")
            if poly.leading_coefficient != 1:
                raise ValueError("place polynomials must be monic")
        self.poly = poly

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def _key(self):
        return (1, ()) if self.poly is None else (0, self.poly.sort_key())

    def __eq__(self, other):
        return isinstance(other, Place) and self.poly == other.poly

    def __lt__(self, other):
        return self._key() < other._key()

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return "Place(oo)" if self.poly is None else f"Place({self.poly})"

    def __str__(self):
        return "oo" if self.poly is None else f"({self.poly})"

    def __reduce__(self):
        return (Place, (self.poly,))


INFINITY = Place(None)


def _as_poly(p) -> RationalPolynomial:
    if isinstance(p, Place):
        if p.poly is None:
            raise ValueError("infinity is not a finite place")
        return p.poly
    return p


class DivisorP1:
    """Divisor ``sum m_i (b_i) + inf_mult (oo)`` with pairwise coprime b_i.

    ``finite`` maps monic squarefree polynomials (or finite Places) to integer
    multiplicities; zero multiplicities are dropped.
    """

    __slots__ = ("_items", "inf_mult", "_canon")

    def __init__(self, finite: Mapping | Iterable = (), inf_mult: int = 0, *, check: bool = True):
        pairs = finite.items() if isinstance(finite, Mapping) else finite
        items = [(_as_poly(p), int(m)) for p, m in pairs if m]
        if check:
            for p, _ in items:
                if p.is_constant() or p.leading_coefficient != 1:
                    raise ValueError(f"place polynomial {p} must be monic of degree >= 1")
                if not poly_gcd(p, p.derivative()).is_constant():
                    raise ValueError(f"place polynomial {p} is not squarefree")
            for i in range(len(items)):
                for j in range(i):
                    if not poly_gcd(items[i][0], items[j][0]).is_constant():
                        raise ValueError("place polynomials must be pairwise coprime")
        items.sort(key=lambda pm: pm[0].sort_key())
        self._items = tuple(items)
        self.inf_mult = int(inf_mult)
        self._canon = None

    @classmethod
    def zero(cls) -> "DivisorP1":
        return cls((), 0, check=False)

    @classmethod
    def at_infinity(cls, m: int = 1) -> "DivisorP1":
        return cls((), m, check=False)

    @classmethod
    def from_places(cls, pairs: Iterable, check: bool = True) -> "DivisorP1":
        """Build from ``(Place, mult)`` pairs, routing INFINITY to inf_mult."""
        finite, inf = [], 0
        for place, m in pairs:
            if place.is_infinite:
                inf += m
            else:
                finite.append((place.poly, m))
        return cls(finite, inf, check=check)

    # -- inspection --
    @property
    def items(self) -> tuple:
        """Finite part as sorted ``(poly, mult)`` pairs."""
        return self._items

    @property
    def finite_part(self) -> dict:
        return {Place(p): m for p, m in self._items}

    def places(self) -> list:
        """``(Place, mult)`` for the whole support, infinity last."""
        out = [(Place(p), m) for p, m in self._items]
        if self.inf_mult:
            out.append((INFINITY, self.inf_mult))
        return out

    @property
    def degree(self) -> int:
        return sum(m * p.degree for p, m in self._items) + self.inf_mult

    def is_effective(self) -> bool:
        return self.inf_mult >= 0 and all(m > 0 for _, m in self._items)

    def is_zero(self) -> bool:
        return not self._items and not self.inf_mult

    def __bool__(self):
        return not self.is_zero()

    def finite_polynomial(self) -> RationalPolynomial:
        """prod b_i**m_i over the finite part (effective divisors only)."""
        if any(m < 0 for _, m in self._items):
            raise NotEffective("finite part has negative multiplicities")
        out = RationalPolynomial([1])
        for p, m in self._items:
            out = out * p ** m
        return out

    def support_polynomial(self) -> RationalPolynomial:
        out = RationalPolynomial([1])
        for p, _ in self._items:
            out = out * p
        return out

    def multiplicity(self, place: Place) -> int:
        """Multiplicity at ``place``; the place must sit inside one basis element."""
        if place.is_infinite:
            return self.inf_mult
        q = place.poly
        for p, m in self._items:
            g = poly_gcd(p, q)
            if g.is_constant():
                continue
            if g.degree == q.degree:
                return m
            raise ValueError(f"{place} straddles basis element ({p}); refine first")
        return 0

    def canonical(self) -> tuple:
        """Basis-independent form: per multiplicity, the product of its places."""
        if self._canon is None:
            groups: dict[int, RationalPolynomial] = {}
            for p, m in self._items:
                groups[m] = groups[m] * p if m in groups else p
            self._canon = (tuple(sorted(groups.items(), key=lambda x: x[0])), self.inf_mult)
        return self._canon

    # -- arithmetic --
    def __add__(self, other: "DivisorP1") -> "DivisorP1":
        basis, rows, infs = common_basis([self, other])
        finite = [(b, rows[0][i] + rows[1][i]) for i, b in enumerate(basis)]
        return DivisorP1(finite, infs[0] + infs[1], check=False)

    def __neg__(self):
        return DivisorP1([(p, -m) for p, m in self._items], -self.inf_mult, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return DivisorP1([(p, k * m) for p, m in self._items], k * self.inf_mult, check=False)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DivisorP1):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __le__(self, other: "DivisorP1") -> bool:
        return (other - self).is_effective()

    def __ge__(self, other: "DivisorP1") -> bool:
        return (self - other).is_effective()

    def __reduce__(self):
        return (_rebuild_divisor, (self._items, self.inf_mult))

    def __repr__(self):
        return f"DivisorP1({self})"

    def __str__(self):
        parts = [f"{m}*({p})" for p, m in self._items]
        if self.inf_mult:
            parts.append(f"{self.inf_mult}*(oo)")
        return " + ".join(parts) if parts else "0"


def _rebuild_divisor(items, inf_mult):
    return DivisorP1(items, inf_mult, check=False)


def _refine_into(basis: list, f: RationalPolynomial) -> list:
    """Insert squarefree monic f into a pairwise coprime basis."""
    out = []
    for b in basis:
        if f.is_constant():
            out.append(b)
            continue
        g = poly_gcd(f, b)
        if g.is_constant():
            out.append(b)
            continue
        out.append(g)
        rest = b.exact_div(g)
        if not rest.is_constant():
            out.append(rest.monic())
        f = f.exact_div(g)
    if not f.is_constant():
        out.append(f.monic())
    return out


def common_basis(divisors: Sequence[DivisorP1]):
    """Shared gcd-free basis for the finite parts of ``divisors``.

    Returns ``(basis, rows, inf_mults)`` where ``rows[k][i]`` is the
    multiplicity of ``basis[i]`` in ``divisors[k]``.
    """
    basis: list = []
    seen = set()
    for d in divisors:
        for p, _ in d.items:
            if p in seen:
                continue
            seen.add(p)
            basis = _refine_into(basis, p)
    basis.sort(key=lambda b: b.sort_key())
    index = {b: i for i, b in enumerate(basis)}
    rows = []
    for d in divisors:
        row = [0] * len(basis)
        for p, m in d.items:
            if p in index:
                row[index[p]] += m
                continue
            remaining = p.degree
            for i, b in enumerate(basis):
                if remaining == 0:
                    break
                if b.degree <= remaining and not poly_gcd(b, p).is_constant():
                    row[i] += m
                    remaining -= b.degree
        rows.append(row)
    return basis, rows, [d.inf_mult for d in divisors]


def coprime_refine(divisors: Sequence[DivisorP1]) -> list:
    """Rewrite every divisor over one pairwise coprime basis."""
    basis, rows, infs = common_basis(divisors)
    return [
        DivisorP1([(b, m) for b, m in zip(basis, row) if m], inf, check=False)
        for row, inf in zip(rows, infs)
    ]


def _polynomial_part(f: RationalPolynomial, sign: int) -> list:
    return [(g, sign * m) for g, m in squarefree_decompose(f)]


def divisor_of(f) -> DivisorP1:
    """Zeros minus poles of a nonzero rational function, including infinity."""
    if not isinstance(f, RationalFunction):
        f = RationalFunction(f)
    if f.is_zero():
        raise DegenerateInput("the zero function has no divisor")
    finite = _polynomial_part(f.num, 1) + _polynomial_part(f.den, -1)
    return DivisorP1(finite, f.den.degree - f.num.degree, check=False)


def _check_effective(*divs):
    for d in divs:
        if not d.is_effective():
            raise NotEffective(f"divisor {d} is not effective")


def divisor_min(d1: DivisorP1, d2: DivisorP1) -> DivisorP1:
    """Per-place minimum of two effective divisors (their GCD)."""
    _check_effective(d1, d2)
    if d1.is_zero() or d2.is_zero():
        return DivisorP1.zero()
    basis, rows, infs = common_basis([d1, d2])
    finite = [(b, min(x, y)) for b, x, y in zip(basis, rows[0], rows[1])]
    return DivisorP1(finite, min(infs), check=False)


def divisor_max(divisors: Sequence[DivisorP1]) -> DivisorP1:
    """Per-place supremum of effective divisors (zero for an empty list)."""
    divisors = list(divisors)
    _check_effective(*divisors)
    if not divisors:
        return DivisorP1.zero()
    basis, rows, infs = common_basis(divisors)
    finite = [(b, max(r[i] for r in rows)) for i, b in enumerate(basis)]
    return DivisorP1(finite, max(infs), check=False)


def divisor_degree(d: DivisorP1) -> int:
    return d.degree


def weil_height_q(r) -> float:
    """Logarithmic height log max(|p|, |q|) of a rational number; 0 at infinity."""
    if r is None or (isinstance(r, float) and math.isinf(r)):
        return 0.0
    r = as_fraction(r)
    m = max(abs(r.numerator), r.denominator)
    return math.log(m)
