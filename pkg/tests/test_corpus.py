from fractions import Fraction

from ellgcd.corpus import EXAMPLES, example_config, legendre_surface, legendre_two_torsion
from ellgcd.specialization import canonical_height_q, specialize_curve, specialize_point, torsion_order
from ellgcd.surface import add, canonical_height_ff

from conftest import T


def test_legendre_short_form():
    # x(x-1)(x-t) with x -> x + (t+1)/3 gives A = -(t^2 - t + 1)/3, B = -(t+1)(2t-1)(t-2)/27
    E = legendre_surface()
    assert E.A == (T ** 2 - T + 1) * Fraction(-1, 3)
    assert E.B == (T + 1) * (2 * T - 1) * (T - 2) * Fraction(-1, 27)


def test_legendre_two_torsion():
    E, sections = legendre_two_torsion()
    for S in sections:
        assert canonical_height_ff(E, S).value == 0
    assert add(E, sections[0], sections[1]) == sections[2]


def test_every_example_loads():
    for name in EXAMPLES:
        cfg = example_config(name)
        assert cfg.members or cfg.ar is not None


def test_legendre_fibre_heights_vanish():
    E, sections = legendre_two_torsion()
    P = sections[0]
    for t in range(2, 22):
        Et = specialize_curve(E, t)
        Pt = specialize_point(P, t)
        assert torsion_order(Et, Pt) == 2
        assert canonical_height_q(Et, Pt).value == 0
