"""Built-in example families."""
from __future__ import annotations

from fractions import Fraction

from .gcd_engine import SectionPair
from .polynomial import RationalPolynomial
from .serialize import RunConfig
from .surface import IDENTITY, SurfaceModel

__all__ = ["EXAMPLES", "example_config", "legendre_surface", "running_pair", "constant_pair"]

T = RationalPolynomial.t()


def legendre_surface() -> SurfaceModel:
    """y^2 = x(x-1)(x-t) moved to short form by x -> x + (1+t)/3."""
    a2 = -(T + 1)
    a4 = T
    A = a4 - a2 * a2 * Fraction(1, 3)
    B = a2 ** 3 * Fraction(2, 27) - a2 * a4 * Fraction(1, 3)
    return SurfaceModel(A, B)


def legendre_two_torsion():
    """Images of the sections x = 0, 1, t (all with y = 0)."""
    E = legendre_surface()
    shift = (T + 1) * Fraction(1, 3)
    return E, [E.point(root - shift, 0) for root in (RationalPolynomial(), RationalPolynomial([1]), T)]


def running_pair() -> SectionPair:
    E1 = SurfaceModel(T, RationalPolynomial([1]))
    E2 = SurfaceModel(T, RationalPolynomial([4]))
    return SectionPair(E1, E1.point(0, 1), E2, E2.point(0, 2))


def constant_pair() -> SectionPair:
    """Constant non-torsion sections on two non-isogenous constant surfaces."""
    E1 = SurfaceModel(RationalPolynomial(), RationalPolynomial([-2]))
    E2 = SurfaceModel(RationalPolynomial([-1]), RationalPolynomial([1]))
    return SectionPair(E1, E1.point(3, 5), E2, E2.point(1, 1))


def _from_pair(pair: SectionPair) -> RunConfig:
    return RunConfig(
        members={"E1": (pair.E1, pair.P1, pair.Q1), "E2": (pair.E2, pair.P2, pair.Q2)},
        independence_asserted=pair.independence_asserted,
    )


def _legendre() -> RunConfig:
    E, (P, _, _) = legendre_two_torsion()
    return RunConfig(members={"E1": (E, P, IDENTITY)})


def _ar_standard() -> RunConfig:
    return RunConfig(ar=(RationalPolynomial([0, 1]), RationalPolynomial([1, 1])))


EXAMPLES = {
    "running-pair": lambda: _from_pair(running_pair()),
    "constant-pair": lambda: _from_pair(constant_pair()),
    "legendre": _legendre,
    "ar-standard": _ar_standard,
}


def example_config(name: str) -> RunConfig:
    try:
        return EXAMPLES[name]()
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}") from None
