"""Elliptic surfaces y^2 = x^3 + A(t) x + B(t) over Q(t) and their sections."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple

from .errors import NotOnCurve, ResourceCap, SingularModel
from .polynomial import RationalPolynomial
from .ratfunc import RationalFunction

__all__ = [
    "SurfaceModel",
    "FFPoint",
    "IDENTITY",
    "new_surface",
    "add",
    "neg",
    "sub",
    "scalar_mul",
    "multiples",
    "division_poly",
    "DivisionPolynomial",
    "x_of_multiple_by_division_polys",
    "j_invariant",
    "is_isotrivial",
    "naive_height_ff",
    "canonical_height_ff",
    "HeightEstimate",
    "degree_cap",
]

DEFAULT_DEGREE_CAP = 5000
TORSION_SEARCH_LIMIT = 12


def degree_cap() -> int:
    """Cap on the degree of intermediate x-coordinates (env ELLGCD_DEGREE_CAP)."""
    raw = os.environ.get("ELLGCD_DEGREE_CAP")
    return int(raw) if raw else DEFAULT_DEGREE_CAP


def _poly(p) -> RationalPolynomial:
    if isinstance(p, RationalPolynomial):
        return p
    if isinstance(p, (list, tuple)):
        return RationalPolynomial(p)
    return RationalPolynomial([p])


@dataclass(frozen=True)
class SurfaceModel:
    """Short Weierstrass model with coefficients in Q[t]."""

    A: RationalPolynomial
    B: RationalPolynomial
    disc: RationalPolynomial = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "A", _poly(self.A))
        object.__setattr__(self, "B", _poly(self.B))
        disc = (self.A ** 3 * 4 + self.B ** 2 * 27) * -16
        if disc.is_zero():
            raise SingularModel(f"discriminant of y^2 = x^3 + ({self.A})x + ({self.B}) vanishes identically")
        object.__setattr__(self, "disc", disc)

    def rhs(self, x: RationalFunction) -> RationalFunction:
        return x * x * x + x * self.A + self.B

    def contains(self, P: "FFPoint") -> bool:
        if P.is_identity:
            return True
        return P.y * P.y == self.rhs(P.x)

    def point(self, x, y) -> "FFPoint":
        """Validated affine section; x and y may be polynomials or rational functions."""
        P = FFPoint(_ratfunc(x), _ratfunc(y))
        if not self.contains(P):
            raise NotOnCurve(f"({P.x}, {P.y}) is not on {self}")
        return P._tagged(self)

    def __str__(self):
        return f"y^2 = x^3 + ({self.A})*x + ({self.B})"


def _ratfunc(v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    return RationalFunction(_poly(v))


def new_surface(A, B) -> SurfaceModel:
    return SurfaceModel(_poly(A), _poly(B))


@dataclass(frozen=True)
class FFPoint:
    """A section: either the identity or an affine point with coordinates in Q(t)."""

    x: RationalFunction | None = None
    y: RationalFunction | None = None
    _curve: SurfaceModel | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("affine points need both coordinates")

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def _tagged(self, E: SurfaceModel) -> "FFPoint":
        if self.x is None:
            return self
        return FFPoint(self.x, self.y, E)

    def __str__(self):
        return "O" if self.x is None else f"({self.x}, {self.y})"


IDENTITY = FFPoint()


def _require_on(E: SurfaceModel, P: FFPoint):
    if P.is_identity or P._curve == E:
        return
    if not E.contains(P):
        raise NotOnCurve(f"{P} is not on {E}")


def _check_cap(P: FFPoint) -> FFPoint:
    if not P.is_identity and P.x.degree > degree_cap():
        raise ResourceCap(f"x-coordinate degree {P.x.degree} exceeds cap {degree_cap()}")
    return P


def neg(E: SurfaceModel, P: FFPoint) -> FFPoint:
    _require_on(E, P)
    if P.is_identity:
        return P
    return FFPoint(P.x, -P.y, E)


def _add(E: SurfaceModel, P: FFPoint, Q: FFPoint) -> FFPoint:
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    if P.x == Q.x:
        if (P.y + Q.y).is_zero():
            return IDENTITY
        lam = (P.x * P.x * 3 + E.A) / (P.y * 2)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return _check_cap(FFPoint(x3, y3, E))


def add(E: SurfaceModel, P: FFPoint, Q: FFPoint) -> FFPoint:
    """Chord-tangent sum of two sections, exact in Q(t)."""
    _require_on(E, P)
    _require_on(E, Q)
    return _add(E, P, Q)


def sub(E: SurfaceModel, P: FFPoint, Q: FFPoint) -> FFPoint:
    return add(E, P, neg(E, Q))


def scalar_mul(E: SurfaceModel, n: int, P: FFPoint) -> FFPoint:
    """[n]P by double-and-add; negative n multiplies the negated point."""
    _require_on(E, P)
    if n < 0:
        return neg(E, scalar_mul(E, -n, P))
    result = IDENTITY
    addend = P
    while n:
        if n & 1:
            result = _add(E, result, addend)
        n >>= 1
        if n:
            addend = _add(E, addend, addend)
    return result


def multiples(E: SurfaceModel, P: FFPoint, n_max: int, start: int = 1) -> Iterator[tuple]:
    """Yield ``(n, [n]P)`` for start <= n <= n_max by repeated addition."""
    _require_on(E, P)
    if start > n_max:
        return
    R = scalar_mul(E, start, P)
    yield start, R
    for n in range(start + 1, n_max + 1):
        R = _add(E, R, P)
        yield n, R


# -- division polynomials -----------------------------------------------------

class _XPoly:
    """Polynomial in x with coefficients in Q[t], lowest x-degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = [p if isinstance(p, RationalPolynomial) else RationalPolynomial([p]) for p in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.c = c

    def __add__(self, other):
        n = max(len(self.c), len(other.c))
        zero = RationalPolynomial()
        return _XPoly([(self.c[i] if i < len(self.c) else zero) + (other.c[i] if i < len(other.c) else zero)
                       for i in range(n)])

    def __neg__(self):
        return _XPoly([-p for p in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, _XPoly):
            if not self.c or not other.c:
                return _XPoly([])
            out = [RationalPolynomial()] * (len(self.c) + len(other.c) - 1)
            for i, a in enumerate(self.c):
                if a.is_zero():
                    continue
                for j, b in enumerate(other.c):
                    if not b.is_zero():
                        out[i + j] = out[i + j] + a * b
            return _XPoly(out)
        return _XPoly([p * other for p in self.c])

    def divexact_monic(self, f: "_XPoly") -> "_XPoly":
        """Exact quotient by a polynomial that is monic in x."""
        r = list(self.c)
        df = len(f.c) - 1
        q = [RationalPolynomial()] * max(len(r) - df, 0)
        while len(r) - 1 >= df:
            lead = r[-1]
            s = len(r) - 1 - df
            q[s] = lead
            for i, fi in enumerate(f.c):
                r[i + s] = r[i + s] - lead * fi
            r.pop()
        if any(not p.is_zero() for p in r):
            raise ArithmeticError("division polynomial recurrence left a remainder")
        return _XPoly(q)

    def evaluate(self, x: RationalFunction) -> RationalFunction:
        """Evaluate at x = num/den using one homogenised Horner pass."""
        if not self.c:
            return RationalFunction(RationalPolynomial())
        num, den = x.num, x.den
        d = len(self.c) - 1
        acc = self.c[-1]
        den_pow = RationalPolynomial([1])
        for i in range(d - 1, -1, -1):
            den_pow = den_pow * den
            acc = acc * num + self.c[i] * den_pow
        return RationalFunction(acc, den_pow)

    @property
    def x_degree(self) -> int:
        return len(self.c) - 1

    def __eq__(self, other):
        return isinstance(other, _XPoly) and self.c == other.c


class DivisionPolynomial(NamedTuple):
    """psi_n = y**y_power * F(x); y**2 has been eliminated through the curve equation."""

    n: int
    y_power: int
    F: _XPoly

    def coefficient(self, i: int) -> RationalPolynomial:
        """Coefficient of x**i in F, a polynomial in t."""
        return self.F.c[i] if i < len(self.F.c) else RationalPolynomial()


class _DivisionPolys:
    def __init__(self, E: SurfaceModel):
        self.E = E
        A, B = E.A, E.B
        self.f = _XPoly([B, A, 0, 1])
        self.cache = {
            0: (0, _XPoly([])),
            1: (0, _XPoly([1])),
            2: (1, _XPoly([2])),
            3: (0, _XPoly([-(A * A), B * 12, A * 6, 0, 3])),
            4: (1, _XPoly([(B * B * -8) - A ** 3, A * B * -4, A * A * -5, B * 20, A * 5, 0, 1]) * 4),
        }

    def _mul(self, u, v):
        e, F = u[0] + v[0], u[1] * v[1]
        if e >= 2:
            e, F = e - 2, F * self.f
        return (e, F)

    def _sub(self, u, v):
        if not u[1].c:
            return (v[0], -v[1])
        if not v[1].c:
            return u
        if u[0] != v[0]:
            raise ArithmeticError("parity mismatch in division polynomial recurrence")
        return (u[0], u[1] - v[1])

    def get(self, n: int):
        if n in self.cache:
            return self.cache[n]
        m = n // 2
        psi = self.get
        mul = self._mul
        if n % 2:
            # psi_{2m+1} = psi_{m+2} psi_m^3 - psi_{m-1} psi_{m+1}^3
            a = mul(psi(m + 2), mul(psi(m), mul(psi(m), psi(m))))
            b = mul(psi(m - 1), mul(psi(m + 1), mul(psi(m + 1), psi(m + 1))))
            val = self._sub(a, b)
        else:
            # 2y psi_{2m} = psi_m (psi_{m+2} psi_{m-1}^2 - psi_{m-2} psi_{m+1}^2)
            a = mul(psi(m + 2), mul(psi(m - 1), psi(m - 1)))
            b = mul(psi(m - 2), mul(psi(m + 1), psi(m + 1)))
            e, F = mul(psi(m), self._sub(a, b))
            if e == 1:
                val = (0, F * Fraction(1, 2))
            else:
                val = (1, F.divexact_monic(self.f) * Fraction(1, 2))
        self.cache[n] = val
        return val


def division_poly(E: SurfaceModel, n: int) -> DivisionPolynomial:
    """n-th division polynomial from the standard recurrences."""
    if n < 0:
        raise ValueError("n must be >= 0")
    e, F = _DivisionPolys(E).get(n)
    return DivisionPolynomial(n, e, F)


def x_of_multiple_by_division_polys(E: SurfaceModel, n: int, P: FFPoint) -> RationalFunction | None:
    """x([n]P) = x - psi_{n-1} psi_{n+1} / psi_n^2; None when [n]P is the identity."""
    if n == 0 or P.is_identity:
        return None
    n = abs(n)
    if n == 1:
        return P.x
    polys = _DivisionPolys(E)
    e1, F1 = polys._mul(polys.get(n - 1), polys.get(n + 1))
    e2, F2 = polys._mul(polys.get(n), polys.get(n))
    if e1 or e2:
        raise ArithmeticError("odd y-power after squaring")
    den = F2.evaluate(P.x)
    if den.is_zero():
        return None
    return P.x - F1.evaluate(P.x) / den


# -- j-invariant and heights ----------------------------------------------------

def j_invariant(E: SurfaceModel) -> RationalFunction:
    """j = 1728 * 4A^3 / (4A^3 + 27B^2)."""
    four_a3 = E.A ** 3 * 4
    return RationalFunction(four_a3 * 1728, four_a3 + E.B ** 2 * 27)


def is_isotrivial(E: SurfaceModel) -> bool:
    return j_invariant(E).is_constant()


def naive_height_ff(P: FFPoint) -> int:
    """Weil height of x(P): max(deg num, deg den), 0 for the identity."""
    if P.is_identity:
        return 0
    return P.x.degree


class HeightEstimate(NamedTuple):
    value: float
    error: float
    estimates: tuple = ()
    torsion_order: int | None = None

    @property
    def is_exact_zero(self) -> bool:
        return self.torsion_order is not None


def _torsion_order_ff(E: SurfaceModel, P: FFPoint, limit: int = TORSION_SEARCH_LIMIT):
    if P.is_identity:
        return 1
    for n, R in multiples(E, P, limit):
        if R.is_identity:
            return n
    return None


def canonical_height_ff(E: SurfaceModel, P: FFPoint, depth: int = 4) -> HeightEstimate:
    """Neron-Tate height on the generic fibre by the doubling limit.

    Torsion sections (order <= 12) short-circuit to an exact 0.  Otherwise the
    value is deg x([2^depth]P) / 4^depth and the error is the last successive
    difference of the estimates.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    _require_on(E, P)
    order = _torsion_order_ff(E, P)
    if order is not None:
        return HeightEstimate(0.0, 0.0, (Fraction(0),), order)
    ests = [Fraction(naive_height_ff(P))]
    R = P
    for k in range(1, depth + 1):
        R = _add(E, R, R)
        ests.append(Fraction(naive_height_ff(R), 4 ** k))
    err = abs(ests[-1] - ests[-2])
    return HeightEstimate(float(ests[-1]), float(err), tuple(ests), None)
