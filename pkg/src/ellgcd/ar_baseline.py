"""Multiplicative baseline: gcd(a^n - 1, b^m - 1) in Q[x]."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .divisor import common_basis, divisor_of
from .errors import DegenerateInput, DependentInputs
from .polynomial import RationalPolynomial, poly_gcd, poly_lcm

__all__ = [
    "ArConfig",
    "ArRow",
    "ArScan",
    "Dependence",
    "ar_gcd",
    "ar_bound_scan",
    "multiplicative_dependence_check",
]


@dataclass(frozen=True)
class ArConfig:
    a: RationalPolynomial
    b: RationalPolynomial

    def __post_init__(self):
        for name in ("a", "b"):
            p = getattr(self, name)
            if not isinstance(p, RationalPolynomial):
                p = RationalPolynomial(p)
                object.__setattr__(self, name, p)
            if p.is_constant():
                raise ValueError(f"{name} must be nonconstant")


def ar_gcd(cfg: ArConfig, n1: int, n2: int) -> RationalPolynomial:
    """Monic gcd(a^n1 - 1, b^n2 - 1)."""
    if n1 < 1 or n2 < 1:
        raise ValueError("exponents must be >= 1")
    return poly_gcd(cfg.a ** n1 - 1, cfg.b ** n2 - 1)


class ArRow(NamedTuple):
    n1: int
    n2: int
    gcd: RationalPolynomial

    @property
    def degree(self) -> int:
        return self.gcd.degree


class ArScan(NamedTuple):
    h_candidate: RationalPolynomial
    rows: list


def ar_bound_scan(cfg: ArConfig, n_max: int) -> ArScan:
    """lcm of the diagonal gcds for n <= n_max, checked to be divisible by each."""
    dep = multiplicative_dependence_check(cfg.a, cfg.b)
    if dep.dependent:
        raise DependentInputs(f"a^{dep.exponents[0]} b^{dep.exponents[1]} is constant")
    rows = []
    h = RationalPolynomial([1])
    for n in range(1, n_max + 1):
        g = ar_gcd(cfg, n, n)
        rows.append(ArRow(n, n, g))
        h = poly_lcm(h, g)
    for row in rows:
        if not row.gcd.divides(h):
            raise ArithmeticError(f"gcd at n={row.n1} does not divide the lcm")
    return ArScan(h, rows)


class Dependence(NamedTuple):
    dependent: bool
    exponents: tuple | None = None
    constant: Fraction | None = None


def multiplicative_dependence_check(a: RationalPolynomial, b: RationalPolynomial) -> Dependence:
    """Exact test for a^i b^j = const with (i, j) != (0, 0).

    Polynomials are dependent exactly when their zero divisors, written over a
    shared coprime basis, are proportional integer vectors.
    """
    if a.is_zero() or b.is_zero():
        raise DegenerateInput("multiplicative dependence of the zero polynomial")
    _, rows, _ = common_basis([divisor_of(a), divisor_of(b)])
    u, v = rows
    if not any(u):
        exps = (1, 0)
    elif not any(v):
        exps = (0, 1)
    else:
        k = next(i for i, x in enumerate(u) if x)
        g = math.gcd(u[k], v[k])
        i, j = v[k] // g, -u[k] // g
        if i < 0:
            i, j = -i, -j
        if any(i * x + j * y for x, y in zip(u, v)):
            return Dependence(False)
        exps = (i, j)
    const = _power_product(a, exps[0]) * _power_product(b, exps[1])
    return Dependence(True, exps, const)


def _power_product(p: RationalPolynomial, e: int) -> Fraction:
    # a^i b^j is constant, so only leading coefficients survive
    return p.leading_coefficient ** e
