import math
from fractions import Fraction

import pytest

from ellgcd.errors import BadFiber, ResourceCap, SectionPole
from ellgcd.gcd_engine import SectionPair, relation_locus
from ellgcd.ratfunc import RationalFunction
from ellgcd.specialization import (
    Q_IDENTITY,
    QCurve,
    RelationWitness,
    canonical_height_q,
    fiber_height_trace,
    q_add,
    q_mul,
    rationals_by_height,
    relation_search,
    simultaneous_relation_scan,
    specialize_curve,
    specialize_point,
    torsion_order,
    verify_witness,
)
from ellgcd.surface import IDENTITY, SurfaceModel, add, scalar_mul

from conftest import T, poly

NON_TORSION = [((0, -2), (3, 5)), ((0, 17), (-2, 3)), ((1, 1), (0, 1))]


def sample(ab, xy):
    E = QCurve(*ab)
    return E, E.point(*xy)


class TestSpecialize:
    def test_bad_fiber(self):
        with pytest.raises(BadFiber):
            specialize_curve(SurfaceModel(T, poly(0)), 0)

    def test_evaluation(self, pair):
        E0 = specialize_curve(pair.E1, 0)
        assert (E0.a, E0.b) == (0, 1)
        assert specialize_point(pair.P1, 0) == E0.point(0, 1)

    def test_duplicate_at_two(self, pair):
        R = scalar_mul(pair.E1, 2, pair.P1)
        Rt = specialize_point(R, 2)
        assert (Rt.x, Rt.y) == (1, -2)
        assert specialize_curve(pair.E1, 2).contains(Rt)

    def test_pole(self):
        E = SurfaceModel(1 + T ** 4 * Fraction(1, 4), poly(0))
        R = E.point(RationalFunction(poly(1), T ** 2), RationalFunction(1 + T ** 4 * Fraction(1, 2), T ** 3))
        with pytest.raises(SectionPole):
            specialize_point(R, 0)

    @pytest.mark.parametrize("t", [Fraction(1), Fraction(-3, 2), Fraction(5), Fraction(2, 7)])
    def test_homomorphism(self, pair, t):
        E, P = pair.E1, pair.P1
        Q = scalar_mul(E, 2, P)
        Et = specialize_curve(E, t)
        lhs = specialize_point(add(E, P, Q), t)
        rhs = q_add(Et, specialize_point(P, t), specialize_point(Q, t))
        assert lhs == rhs


class TestTorsion:
    def test_examples(self):
        E, P = sample((0, 1), (0, 1))
        assert torsion_order(E, P) == 3
        assert torsion_order(E, Q_IDENTITY) == 1
        E, P = sample((0, -2), (3, 5))
        assert torsion_order(E, P) is None

    @pytest.mark.parametrize("ab,xy", [((0, 1), (0, 1)), ((0, 1), (2, 3)), ((-1, 0), (0, 0)), ((0, 1), (-1, 0))])
    def test_minimality(self, ab, xy):
        E, P = sample(ab, xy)
        k = torsion_order(E, P)
        assert q_mul(E, k, P).is_identity
        assert all(not q_mul(E, j, P).is_identity for j in range(1, k))


class TestHeights:
    def test_torsion_exact_zero(self):
        E, P = sample((0, 1), (0, 1))
        h = canonical_height_q(E, P)
        assert h.value == 0 and h.error == 0 and h.torsion_order == 3
        assert canonical_height_q(E, Q_IDENTITY).value == 0

    def test_stable_across_depths(self):
        E, P = sample((0, -2), (3, 5))
        h = canonical_height_q(E, P, 5)
        assert h.value > 0
        for d in (3, 4):
            assert abs(canonical_height_q(E, P, d).value - h.value) <= canonical_height_q(E, P, d).error + h.error

    @pytest.mark.parametrize("ab,xy", NON_TORSION)
    def test_quadratic_in_three(self, ab, xy):
        E, P = sample(ab, xy)
        h1 = canonical_height_q(E, P)
        h3 = canonical_height_q(E, q_mul(E, 3, P))
        assert abs(h3.value - 9 * h1.value) <= 9 * (h1.error + h3.error)

    @pytest.mark.parametrize("depth", [6, 7])
    def test_against_known_value(self, depth):
        # generator (0, 0) of y^2 + y = x^3 - x, moved to y^2 = x^3 - 16x + 16;
        # its canonical height in the log H(x) normalisation is 0.0511114082399688
        E, P = sample((-16, 16), (0, 4))
        h = canonical_height_q(E, P, depth)
        assert abs(h.value - 0.0511114082399688) <= h.error

    def test_bit_cap(self, monkeypatch):
        import ellgcd.specialization as sp
        monkeypatch.setattr(sp, "INTEGER_BIT_CAP", 50)
        E, P = sample((0, -2), (3, 5))
        with pytest.raises(ResourceCap):
            canonical_height_q(E, P)


class TestRelations:
    def test_multiple(self):
        E, P = sample((0, -2), (3, 5))
        assert relation_search(E, P, q_mul(E, 5, P)).m == 5
        assert relation_search(E, P, q_mul(E, -4, P)).m == -4

    def test_torsion_to_identity(self):
        E, P = sample((0, 1), (0, 1))
        assert relation_search(E, P, Q_IDENTITY).m == 3

    def test_unrelated(self):
        E = QCurve(0, 17)
        res = relation_search(E, E.point(-2, 3), E.point(-1, 4))
        assert res.m is None and res.cap >= 1

    def test_height_identity(self):
        E, P = sample((0, 17), (-2, 3))
        Q = q_mul(E, 3, P)
        res = relation_search(E, P, Q)
        hP, hQ = canonical_height_q(E, P), canonical_height_q(E, Q)
        assert res.m == 3
        assert abs(res.m ** 2 * hP.value - hQ.value) <= 9 * hP.error + hQ.error

    def test_enumeration(self):
        ts = list(rationals_by_height(math.log(2)))
        assert ts == [Fraction(-1), Fraction(0), Fraction(1),
                      Fraction(-2), Fraction(-1, 2), Fraction(1, 2), Fraction(2)]

    def test_doubled_targets(self, pair):
        p = SectionPair(pair.E1, pair.P1, pair.E2, pair.P2,
                        scalar_mul(pair.E1, 2, pair.P1), scalar_mul(pair.E2, 2, pair.P2))
        ws = simultaneous_relation_scan(p, math.log(3))
        good = [t for t in rationals_by_height(math.log(3))
                if pair.E1.disc(t) != 0 and pair.E2.disc(t) != 0]
        assert [w.t for w in ws] == sorted(good, key=lambda t: (math.log(max(abs(t.numerator), t.denominator)), t))
        # [2]P_t = Q_t also holds with m = 2 - order when P_t is torsion; 2 is the generic answer
        assert all(verify_witness(p, w) for w in ws)
        assert sum(1 for w in ws if (w.m1, w.m2) == (2, 2)) >= len(ws) - 2

    def test_constant_pair_empty(self, const_pair):
        assert simultaneous_relation_scan(const_pair, math.log(4)) == []

    def test_running_pair_matches_torsion_loci(self, pair):
        cap = math.log(3)
        ws = simultaneous_relation_scan(pair, cap)
        assert ws and all(verify_witness(pair, w) for w in ws)
        loci = {}
        for i in (1, 2):
            E, P, Q = pair.member(i)
            loci[i] = [relation_locus(E, P, Q, m)[1] for m in range(1, 13)]
        expected = []
        for t in rationals_by_height(cap):
            if pair.E1.disc(t) == 0 or pair.E2.disc(t) == 0:
                continue
            if any(f(t) == 0 for f in loci[1]) and any(f(t) == 0 for f in loci[2]):
                expected.append(t)
        assert sorted(w.t for w in ws) == sorted(expected)

    def test_workers_match(self, pair):
        assert simultaneous_relation_scan(pair, 1.2, workers=2) == simultaneous_relation_scan(pair, 1.2)

    def test_forged_witness_rejected(self, pair):
        assert not verify_witness(pair, RelationWitness(Fraction(5), 1, 1, 0.0, (0.0, 0.0)))


class TestTrace:
    def test_constant_surface(self, const_pair):
        rows = fiber_height_trace(const_pair.E1, const_pair.P1, [2, 3, Fraction(1, 5)])
        assert len({r.fiber_height for r in rows}) == 1

    def test_torsion_section(self):
        E = SurfaceModel(T, T + 1)
        rows = fiber_height_trace(E, E.point(-1, 0), [2, 3, 5])
        assert all(r.fiber_height == 0 and r.ratio == 0 for r in rows)

    def test_bad_fiber_marked(self):
        E = SurfaceModel(T, poly(0))
        rows = fiber_height_trace(E, IDENTITY, [0, 1])
        assert rows[0].marker == "bad_fiber" and rows[1].marker == ""
