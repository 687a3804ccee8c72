"""Fibres over rational parameters: specialisation, canonical heights over Q,
torsion and relation detection, and scans for simultaneous relations."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

from .divisor import weil_height_q
from .errors import BadFiber, NotOnCurve, ResourceCap, SectionPole
from .gcd_engine import SectionPair
from .polynomial import as_fraction
from .surface import FFPoint, SurfaceModel

__all__ = [
    "QCurve",
    "QPoint",
    "Q_IDENTITY",
    "RelationWitness",
    "RelationResult",
    "QHeight",
    "specialize_curve",
    "specialize_point",
    "canonical_height_q",
    "torsion_order",
    "relation_search",
    "simultaneous_relation_scan",
    "verify_witness",
    "fiber_height_trace",
    "TraceRow",
    "rationals_by_height",
    "q_add",
    "q_neg",
    "q_mul",
]

INTEGER_BIT_CAP = 10 ** 6
MAZUR_TORSION_CAP = 12
AUTO_CAP_FALLBACK = 64


@dataclass(frozen=True)
class QCurve:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        if self.disc == 0:
            raise BadFiber(f"y^2 = x^3 + {self.a}x + {self.b} is singular")

    @property
    def disc(self) -> Fraction:
        return -16 * (4 * self.a ** 3 + 27 * self.b ** 2)

    def contains(self, P: "QPoint") -> bool:
        return P.is_identity or P.y * P.y == P.x ** 3 + self.a * P.x + self.b

    def point(self, x, y) -> "QPoint":
        P = QPoint(as_fraction(x), as_fraction(y))
        if not self.contains(P):
            raise NotOnCurve(f"({x}, {y}) is not on {self}")
        return P

    def __str__(self):
        return f"y^2 = x^3 + ({self.a})x + ({self.b})"


class QPoint(NamedTuple):
    x: Fraction | None = None
    y: Fraction | None = None

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __str__(self):
        return "O" if self.x is None else f"({self.x}, {self.y})"


Q_IDENTITY = QPoint()


def q_neg(E: QCurve, P: QPoint) -> QPoint:
    return P if P.is_identity else QPoint(P.x, -P.y)


def q_add(E: QCurve, P: QPoint, Q: QPoint) -> QPoint:
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    if P.x == Q.x:
        if P.y + Q.y == 0:
            return Q_IDENTITY
        lam = (3 * P.x * P.x + E.a) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    return QPoint(x3, lam * (P.x - x3) - P.y)


def q_mul(E: QCurve, n: int, P: QPoint) -> QPoint:
    if n < 0:
        return q_neg(E, q_mul(E, -n, P))
    result, addend = Q_IDENTITY, P
    while n:
        if n & 1:
            result = q_add(E, result, addend)
        n >>= 1
        if n:
            addend = q_add(E, addend, addend)
    return result


def specialize_curve(E: SurfaceModel, r) -> QCurve:
    r = as_fraction(r)
    if E.disc(r) == 0:
        raise BadFiber(f"fibre at t = {r} is singular")
    return QCurve(E.A(r), E.B(r))


def specialize_point(P: FFPoint, r) -> QPoint:
    """Evaluate a section at t = r; SectionPole when it meets the fibre at infinity."""
    if P.is_identity:
        return Q_IDENTITY
    r = as_fraction(r)
    if P.x.den(r) == 0 or P.y.den(r) == 0:
        raise SectionPole(f"section has a pole at t = {r}")
    return QPoint(P.x(r), P.y(r))


def _specialize_or_identity(P: FFPoint, r) -> QPoint:
    try:
        return specialize_point(P, r)
    except SectionPole:
        return Q_IDENTITY


def torsion_order(E: QCurve, P: QPoint) -> int | None:
    """Smallest k <= 12 with [k]P = O, else None."""
    R = Q_IDENTITY
    for k in range(1, MAZUR_TORSION_CAP + 1):
        R = q_add(E, R, P)
        if R.is_identity:
            return k
    return None


class QHeight(NamedTuple):
    value: float
    error: float
    estimates: tuple = ()
    torsion_order: int | None = None


def canonical_height_q(E: QCurve, P: QPoint, depth: int = 5) -> QHeight:
    """Doubling-limit canonical height h(x([2^depth]P)) / 4^depth.

    The error is the largest successive difference, rescaled to the last
    doubling step, times the geometric tail factor 1/3.  Torsion points
    return an exact 0.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    order = torsion_order(E, P)
    if order is not None:
        return QHeight(0.0, 0.0, (0.0,), order)
    ests = [weil_height_q(P.x)]
    R = P
    for k in range(1, depth + 1):
        R = q_add(E, R, R)
        bits = max(R.x.numerator.bit_length(), R.x.denominator.bit_length())
        if bits > INTEGER_BIT_CAP:
            raise ResourceCap(f"x-coordinate needs {bits} bits at doubling step {k}")
        ests.append(weil_height_q(R.x) / 4 ** k)
    # h(2R) - 4h(R) is bounded along the chain; the largest observed jump,
    # rescaled to the last step, times the tail factor 1/3 bounds the rest
    jumps = [abs(ests[k + 1] - ests[k]) * 4 ** (k + 1 - depth) for k in range(depth)]
    err = max(jumps) / 3
    return QHeight(ests[-1], err, tuple(ests), None)


class RelationResult(NamedTuple):
    m: int | None
    cap: int

    @property
    def found(self) -> bool:
        return self.m is not None


def relation_search(E: QCurve, P: QPoint, Q: QPoint, m_cap="auto", depth: int = 5) -> RelationResult:
    """Smallest |m| >= 1 with [m]P = Q (positive m tried first).

    The automatic cap comes from m^2 h(P) = h(Q); for torsion P the search
    runs over one period instead.
    """
    order = None
    if m_cap == "auto":
        hP = canonical_height_q(E, P, depth)
        if hP.value > 1e-3:
            hQ = canonical_height_q(E, Q, depth)
            cap = math.ceil(math.sqrt(hQ.value / hP.value)) + 2
        else:
            order = hP.torsion_order
            cap = order if order is not None else AUTO_CAP_FALLBACK
    else:
        cap = int(m_cap)
    pos = neg = P
    for m in range(1, cap + 1):
        if m > 1:
            pos = q_add(E, pos, P)
            neg = q_neg(E, pos)
        else:
            neg = q_neg(E, P)
        if pos == Q:
            return RelationResult(m, cap)
        if neg == Q:
            return RelationResult(-m, cap)
    return RelationResult(None, cap)


@dataclass(frozen=True)
class RelationWitness:
    t: Fraction
    m1: int
    m2: int
    h_base: float
    fiber_heights: tuple


def rationals_by_height(height_cap: float) -> Iterator[Fraction]:
    """Every rational t with log max(|p|, q) <= height_cap, ordered by (H, t)."""
    bound = math.floor(math.exp(height_cap) + 1e-9)
    out = []
    for H in range(1, bound + 1):
        level = set()
        for other in range(0, H + 1):
            for p, q in ((H, other), (other, H)):
                if q >= 1 and math.gcd(p, q) == 1 and max(p, q) == H:
                    level.add(Fraction(p, q))
                    level.add(Fraction(-p, q))
        out.extend(sorted(level))
    yield from out


def _fiber_data(pair: SectionPair, t: Fraction):
    fibers = []
    for i in (1, 2):
        E, P, Q = pair.member(i)
        Et = specialize_curve(E, t)
        fibers.append((Et, _specialize_or_identity(P, t), _specialize_or_identity(Q, t)))
    return fibers


def _witness_at(pair: SectionPair, t: Fraction):
    try:
        fibers = _fiber_data(pair, t)
    except BadFiber:
        return None
    ms = []
    for Et, Pt, Qt in fibers:
        res = relation_search(Et, Pt, Qt)
        if res.m is None:
            return None
        ms.append(res.m)
    heights = tuple(canonical_height_q(Et, Pt).value for Et, Pt, _ in fibers)
    w = RelationWitness(t, ms[0], ms[1], weil_height_q(t), heights)
    if not verify_witness(pair, w):
        raise AssertionError(f"witness at t = {t} failed exact re-verification")
    return w


def verify_witness(pair: SectionPair, w: RelationWitness) -> bool:
    """Re-check [m_i](P_i)_t = (Q_i)_t from scratch with exact arithmetic."""
    try:
        fibers = _fiber_data(pair, w.t)
    except BadFiber:
        return False
    return all(q_mul(Et, m, Pt) == Qt for (Et, Pt, Qt), m in zip(fibers, (w.m1, w.m2)))


def simultaneous_relation_scan(pair: SectionPair, t_height_cap: float, workers: int = 1) -> list:
    """Rational parameters of bounded height where both relations hold."""
    ts = list(rationals_by_height(t_height_cap))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            found = list(pool.map(_witness_at, [pair] * len(ts), ts, chunksize=16))
    else:
        found = [_witness_at(pair, t) for t in ts]
    return sorted((w for w in found if w is not None), key=lambda w: (w.h_base, w.t))


class TraceRow(NamedTuple):
    t: Fraction
    h_base: float | None
    fiber_height: float | None
    ratio: float | None
    marker: str = ""


def fiber_height_trace(E: SurfaceModel, P: FFPoint, t_list: Iterable, depth: int = 5) -> list:
    """``(t, h(t), canonical height of P_t, ratio)`` rows; bad fibres are marked."""
    rows = []
    for t in t_list:
        t = as_fraction(t)
        try:
            Et = specialize_curve(E, t)
        except BadFiber:
            rows.append(TraceRow(t, None, None, None, "bad_fiber"))
            continue
        Pt = _specialize_or_identity(P, t)
        h_t = weil_height_q(t)
        h_fiber = canonical_height_q(Et, Pt, depth).value
        ratio = h_fiber / h_t if h_t > 0 else None
        rows.append(TraceRow(t, h_t, h_fiber, ratio))
    return rows
