"""GCD divisors of sections: pullbacks of the zero section, degree tables,
the n_gamma stability law and multiplicity scans.

Intersection multiplicities are read off the affine Weierstrass model: where
x has a pole of order 2k and y one of order 3k the section meets the zero
section with multiplicity k.  Places dividing the discriminant, and places
whose pole orders break the (2k, 3k) pattern, are excluded from supports and
reported separately as bad places.  The place at infinity is read on the
same t-chart.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

import mpmath

from .divisor import (
    INFINITY,
    DivisorP1,
    Place,
    common_basis,
    divisor_max,
    divisor_min,
)
from .errors import IdenticallyZeroSection, ResourceCap
from .polynomial import RationalPolynomial, squarefree_decompose
from .surface import (
    IDENTITY,
    FFPoint,
    SurfaceModel,
    _add,
    _require_on,
    multiples,
    neg,
    scalar_mul,
)

log = logging.getLogger(__name__)

__all__ = [
    "SectionPair",
    "GcdRow",
    "GcdReport",
    "StabilityReport",
    "LawViolation",
    "LocusStats",
    "zero_section_pullback",
    "pullback_with_bad_places",
    "meet_divisor",
    "meet_divisors",
    "gcd_of_points",
    "gcd_degree_table",
    "bounding_divisor",
    "stability_scan",
    "density_avoiding",
    "multiplicity_bound_scan",
    "relation_locus",
    "locus_height_stats",
    "primes_up_to",
]


@dataclass(frozen=True)
class SectionPair:
    E1: SurfaceModel
    P1: FFPoint
    E2: SurfaceModel
    P2: FFPoint
    Q1: FFPoint = IDENTITY
    Q2: FFPoint = IDENTITY
    independence_asserted: bool = True

    def __post_init__(self):
        for E, pts in ((self.E1, (self.P1, self.Q1)), (self.E2, (self.P2, self.Q2))):
            for pt in pts:
                _require_on(E, pt)

    def member(self, i: int) -> tuple:
        """(E_i, P_i, Q_i) for i in {1, 2}."""
        if i == 1:
            return self.E1, self.P1, self.Q1
        if i == 2:
            return self.E2, self.P2, self.Q2
        raise ValueError("pair index must be 1 or 2")


def _pole_divisor(f: RationalPolynomial) -> DivisorP1:
    return DivisorP1(squarefree_decompose(f), 0, check=False)


def pullback_with_bad_places(E: SurfaceModel, R: FFPoint) -> tuple:
    """``(divisor, bad_places)`` for the pullback of the zero section along R.

    ``bad_places`` has multiplicity 1 on every place that was excluded.
    """
    if R.is_identity:
        raise IdenticallyZeroSection()
    x, y = R.x, R.y
    poles_x = _pole_divisor(x.den)
    poles_y = _pole_divisor(y.den)
    bad_support = DivisorP1([(g, 1) for g, _ in squarefree_decompose(E.disc)], 0, check=False)
    basis, (rx, ry, rd), _ = common_basis([poles_x, poles_y, bad_support])
    good, bad = [], []
    for b, kx, ky, kd in zip(basis, rx, ry, rd):
        if kx == 0 and ky == 0:
            continue
        if kd or kx % 2 or 2 * ky != 3 * kx:
            bad.append((b, 1))
        else:
            good.append((b, ky - kx))
    inf_mult, inf_bad = 0, 0
    ox = x.ord_infinity() if x.num else math.inf
    oy = y.ord_infinity() if y.num else math.inf
    if ox < 0 or oy < 0:
        if ox % 2 == 0 and 2 * oy == 3 * ox:
            inf_mult = ox - oy
        else:
            inf_bad = 1
    return DivisorP1(good, inf_mult, check=False), DivisorP1(bad, inf_bad, check=False)


def zero_section_pullback(E: SurfaceModel, R: FFPoint) -> DivisorP1:
    """Effective divisor of parameters where R meets the zero section."""
    return pullback_with_bad_places(E, R)[0]


def _difference(E, R, Q):
    if Q.is_identity:
        return R
    return _add(E, R, neg(E, Q))


def meet_divisor(E: SurfaceModel, P: FFPoint, Q: FFPoint, n: int) -> DivisorP1:
    """Divisor of t where [n]P_t = Q_t on smooth fibres."""
    return _meet(E, P, Q, n)[0]


def _meet(E, P, Q, n):
    R = _difference(E, scalar_mul(E, n, P), Q)
    if R.is_identity:
        raise IdenticallyZeroSection(f"[{n}]P = Q identically")
    return pullback_with_bad_places(E, R)


def _meet_job(args):
    E, P, Q, n = args
    try:
        return n, _meet(E, P, Q, n)
    except IdenticallyZeroSection:
        return n, None


def meet_divisors(E, P, Q, ns, workers: int = 1) -> dict:
    """``{n: (divisor, bad) or None}``; None marks [n]P = Q identically.

    With ``workers > 1`` every n is computed independently in a process pool;
    the serial path walks the multiples incrementally.  Both return the same
    canonical divisors.  A ResourceCap carries the completed entries.
    """
    ns = sorted(set(ns))
    out: dict = {}
    if not ns:
        return out
    if workers > 1 and len(ns) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {n: pool.submit(_meet_job, (E, P, Q, n)) for n in ns}
            for n in ns:
                try:
                    out[n] = futures[n].result()[1]
                except ResourceCap as exc:
                    raise ResourceCap(str(exc), partial=out) from exc
        return out
    wanted = set(ns)
    try:
        for n, R in multiples(E, P, ns[-1], start=ns[0]):
            if n not in wanted:
                continue
            D = _difference(E, R, Q)
            out[n] = None if D.is_identity else pullback_with_bad_places(E, D)
    except ResourceCap as exc:
        raise ResourceCap(str(exc), partial=out) from exc
    return out


def gcd_of_points(pair: SectionPair, n1: int, n2: int) -> DivisorP1:
    """GCD([n1]P1 - Q1, [n2]P2 - Q2)."""
    divs = []
    for i, n in ((1, n1), (2, n2)):
        E, P, Q = pair.member(i)
        try:
            divs.append(meet_divisor(E, P, Q, n))
        except IdenticallyZeroSection as exc:
            raise IdenticallyZeroSection(f"[{n}]P{i} = Q{i} identically", index=i) from exc
    return divisor_min(*divs)


class GcdRow(NamedTuple):
    n1: int
    n2: int
    divisor: DivisorP1 | None
    degree: int | None
    marker: str = ""


@dataclass
class GcdReport:
    rows: list
    bad_places: DivisorP1
    n_max: int = 0
    diagonal_only: bool = False
    complete: bool = True

    def degrees(self) -> dict:
        return {(r.n1, r.n2): r.degree for r in self.rows if r.divisor is not None}

    def max_degree(self, lo: int = 1, hi: int | None = None) -> int:
        """Largest diagonal-or-not degree among rows with lo <= n1, n2 <= hi."""
        hi = self.n_max if hi is None else hi
        vals = [r.degree for r in self.rows
                if r.divisor is not None and lo <= r.n1 <= hi and lo <= r.n2 <= hi]
        return max(vals, default=0)

    @property
    def looks_unbounded(self) -> bool:
        """Block maxima of the degree strictly increase over three equal blocks of n.

        Evidence against the asserted independence of the pair; bounded tables
        with a periodic pattern shorter than a block are not flagged.
        """
        L = self.n_max // 3
        if L < 1:
            return False
        maxima = [self.max_degree(k * L + 1, (k + 1) * L) for k in range(3)]
        return maxima[0] < maxima[1] < maxima[2]


def _bad_union(entries) -> DivisorP1:
    bads = [e[1] for e in entries if e is not None and not e[1].is_zero()]
    if not bads:
        return DivisorP1.zero()
    sup = divisor_max(bads)
    return DivisorP1([(p, 1) for p, _ in sup.items], 1 if sup.inf_mult else 0, check=False)


def _rows_from(meets1, meets2, pairs):
    rows = []
    for n1, n2 in pairs:
        if n1 not in meets1 or n2 not in meets2:
            continue
        a, b = meets1[n1], meets2[n2]
        if a is None or b is None:
            which = ",".join(str(i) for i, v in ((1, a), (2, b)) if v is None)
            rows.append(GcdRow(n1, n2, None, None, f"identically_zero:{which}"))
            continue
        g = divisor_min(a[0], b[0])
        rows.append(GcdRow(n1, n2, g, g.degree))
    return rows


def gcd_degree_table(pair: SectionPair, n_max: int, diagonal_only: bool = False,
                     workers: int = 1) -> GcdReport:
    """Degrees of GCD([n1]P1 - Q1, [n2]P2 - Q2) for 1 <= n1, n2 <= n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    ns = range(1, n_max + 1)
    pairs = [(n, n) for n in ns] if diagonal_only else [(a, b) for a in ns for b in ns]
    meets = []
    try:
        for i in (1, 2):
            meets.append(meet_divisors(*pair.member(i), ns, workers=workers))
    except ResourceCap as exc:
        meets.append(exc.partial or {})
        # fill the other member on the prefix of n that did complete
        done = 0
        while done + 1 in meets[-1]:
            done += 1
        if len(meets) == 1:
            try:
                meets.append(meet_divisors(*pair.member(2), range(1, done + 1), workers=workers))
            except ResourceCap as inner:
                meets.append(inner.partial or {})
        partial = GcdReport(_rows_from(meets[0], meets[1], pairs),
                            _bad_union(list(meets[0].values()) + list(meets[1].values())),
                            n_max, diagonal_only, complete=False)
        raise ResourceCap(str(exc), partial=partial) from exc
    rows = _rows_from(meets[0], meets[1], pairs)
    bad = _bad_union(list(meets[0].values()) + list(meets[1].values()))
    return GcdReport(rows, bad, n_max, diagonal_only)


def bounding_divisor(report: GcdReport) -> DivisorP1:
    """Per-place supremum of every divisor in the report."""
    if not report.rows:
        raise ValueError("empty report")
    return divisor_max([r.divisor for r in report.rows if r.divisor is not None])


# -- stability law ------------------------------------------------------------

def primes_up_to(n: int) -> list:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


def density_avoiding(moduli) -> Fraction:
    """Density of positive integers divisible by none of ``moduli``.

    Inclusion-exclusion over the minimal elements under divisibility.
    """
    mods = sorted(set(moduli))
    minimal = [m for m in mods if not any(d != m and m % d == 0 for d in mods)]
    total = Fraction(0)
    for r in range(len(minimal) + 1):
        for sub in combinations(minimal, r):
            total += Fraction((-1) ** r, math.lcm(*sub) if sub else 1)
    return total


class LawViolation(NamedTuple):
    place: Place
    n: int
    predicted: bool
    observed: bool


@dataclass
class StabilityReport:
    base_gcd: DivisorP1
    n_gamma: dict
    density_lower_bound: Fraction
    stable_primes: list
    exceptional_primes: list
    violations: list = field(default_factory=list)
    gcds: dict = field(default_factory=dict)
    bad_places: DivisorP1 = field(default_factory=DivisorP1.zero)
    n_max: int = 0
    prime_max: int = 0

    @property
    def law_holds(self) -> bool:
        return not self.violations


def stability_scan(pair: SectionPair, n_max: int, prime_max: int, workers: int = 1) -> StabilityReport:
    """Collect n_gamma for every place that enters GCD([n]P1, [n]P2) and test
    the law  gamma in supp GCD([n]P1, [n]P2)  <=>  n_gamma | n."""
    if not (pair.Q1.is_identity and pair.Q2.is_identity):
        raise ValueError("stability_scan needs Q1 = Q2 = identity")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    primes = primes_up_to(prime_max)
    ns = sorted(set(range(1, n_max + 1)) | set(primes))
    meets = [meet_divisors(*pair.member(i), ns, workers=workers) for i in (1, 2)]
    gcds = {}
    for n in ns:
        a, b = meets[0][n], meets[1][n]
        if a is None or b is None:
            i = 1 if a is None else 2
            raise IdenticallyZeroSection(f"[{n}]P{i} is the identity: P{i} is torsion", index=i)
        gcds[n] = divisor_min(a[0], b[0])
    base = gcds[1]
    basis, rows, infs = common_basis([gcds[n] for n in ns])
    places = [Place(b) for b in basis] + [INFINITY]
    presence = {n: [m > 0 for m in row] + [inf > 0] for n, row, inf in zip(ns, rows, infs)}
    scan = [n for n in ns if n <= n_max]
    n_gamma, violations = {}, []
    for j, place in enumerate(places):
        hits = [n for n in scan if presence[n][j]]
        if not hits:
            continue
        first = 1 if presence[1][j] else hits[0]
        if first > 1:
            n_gamma[place] = first
        for n in ns:
            predicted = n % first == 0
            observed = presence[n][j]
            if predicted != observed:
                violations.append(LawViolation(place, n, predicted, observed))
    for v in violations:
        log.warning("divisibility law violated at %s, n=%d", v.place, v.n)
    stable, exceptional = [], []
    for q in primes:
        (stable if gcds[q] == base else exceptional).append(q)
    bad = _bad_union([e for m in meets for e in m.values()])
    return StabilityReport(
        base_gcd=base,
        n_gamma=n_gamma,
        density_lower_bound=density_avoiding(n_gamma.values()),
        stable_primes=stable,
        exceptional_primes=exceptional,
        violations=violations,
        gcds=gcds,
        bad_places=bad,
        n_max=n_max,
        prime_max=prime_max,
    )


# -- multiplicities and relation loci -------------------------------------------

def multiplicity_bound_scan(E: SurfaceModel, P: FFPoint, Q: FFPoint, n_max: int,
                            n_min: int = 1, workers: int = 1) -> dict:
    """``{Place: (max multiplicity, first n attaining it)}`` over n_min <= n <= n_max."""
    meets = meet_divisors(E, P, Q, range(n_min, n_max + 1), workers=workers)
    ns = sorted(meets)
    for n in ns:
        if meets[n] is None:
            raise IdenticallyZeroSection(f"[{n}]P = Q identically")
    divs = [meets[n][0] for n in ns]
    basis, rows, infs = common_basis(divs)
    out = {}
    columns = [(Place(b), [r[i] for r in rows]) for i, b in enumerate(basis)]
    columns.append((INFINITY, infs))
    for place, col in columns:
        best = max(col, default=0)
        if best > 0:
            out[place] = (best, ns[col.index(best)])
    return out


def relation_locus(E: SurfaceModel, P: FFPoint, Q: FFPoint, m: int) -> tuple:
    """Locus of [m]P_t = Q_t: the divisor and its finite part as one polynomial."""
    D = meet_divisor(E, P, Q, m)
    return D, D.finite_polynomial()


class LocusStats(NamedTuple):
    mean_height: float
    max_height: float
    degree: int
    error: float


def locus_height_stats(poly: RationalPolynomial, prec: int = 80) -> LocusStats:
    """Average and largest root height of a squarefree polynomial.

    The mean is log M(f) / deg f for the primitive integer model of f, with the
    roots approximated at ``prec`` bits.
    """
    if poly.is_zero():
        raise ValueError("zero polynomial has no roots")
    d = poly.degree
    if d < 1:
        return LocusStats(0.0, 0.0, 0, 0.0)
    ints = poly.primitive_part
    with mpmath.workprec(prec):
        coeffs = [mpmath.mpf(c) for c in reversed(ints)]
        roots, err = _roots(coeffs, d)
        logs = [mpmath.log(max(mpmath.mpf(1), abs(r))) for r in roots]
        mean = (mpmath.log(abs(coeffs[0])) + mpmath.fsum(logs)) / d
        top = max(logs)
        # first-order propagation of the root error through log+|.|
        slack = err * mpmath.fsum(1 / max(mpmath.mpf(1), abs(r)) for r in roots) / d
        return LocusStats(float(mean), float(top), d, float(slack))


def _roots(coeffs, d):
    steps, extra = max(50, 4 * d), max(20, d)
    for _ in range(4):
        try:
            return mpmath.polyroots(coeffs, maxsteps=steps, extraprec=extra, error=True)
        except mpmath.libmp.libhyper.NoConvergence:
            steps, extra = steps * 2, extra * 2
    return mpmath.polyroots(coeffs, maxsteps=steps, extraprec=extra, error=True)
