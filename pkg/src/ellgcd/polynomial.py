"""Exact univariate polynomials over the rationals.

A polynomial is stored as ``content * prim`` where ``prim`` is a primitive
integer polynomial with positive leading coefficient and ``content`` is a
nonzero Fraction.  Gauss's lemma makes products of primitive parts primitive,
so multiplication never needs a content gcd, and all heavy lifting happens on
plain Python integers.

Large products and exact quotients go through Kronecker substitution: a
polynomial is packed into one big integer in base ``2**k`` and the integer
kernels of gmpy2 do the work.  GCDs use the heuristic integer gcd (GCDHEU)
with an exact divisibility check and fall back to the subresultant PRS.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import gmpy2

from .errors import DegenerateInput

__all__ = [
    "RationalPolynomial",
    "poly_gcd",
    "poly_lcm",
    "subresultant_gcd",
    "squarefree_decompose",
    "as_fraction",
]

_SCHOOLBOOK_CUTOFF = 24
_HEU_ATTEMPTS = 4


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not exact; pass a string")
    raise TypeError(f"cannot interpret {value!r} as a rational number")


# -- integer polynomial kernels ---------------------------------------------
# Lists are lowest degree first, no trailing zeros unless stated otherwise.


def _strip(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _maxbits(c: Sequence[int]) -> int:
    return max((abs(x).bit_length() for x in c), default=0)


def _digit_bits(nbits: int) -> int:
    # packing width in bits, rounded up to whole bytes
    return ((nbits + 8) // 8) * 8


def _pack(c: Sequence[int], k: int) -> int:
    """Evaluate ``c`` at ``2**k``; ``k`` must be a multiple of 8."""
    nb = k // 8
    pos = b"".join((x if x > 0 else 0).to_bytes(nb, "little") for x in c)
    v = int.from_bytes(pos, "little")
    if any(x < 0 for x in c):
        neg = b"".join((-x if x < 0 else 0).to_bytes(nb, "little") for x in c)
        v -= int.from_bytes(neg, "little")
    return v


def _unpack(v: int, k: int) -> list:
    """Balanced base ``2**k`` digits of ``v`` (inverse of _pack)."""
    if v == 0:
        return []
    nb = k // 8
    n = abs(v).bit_length() // k + 2
    offset = int.from_bytes((b"\x00" * (nb - 1) + b"\x80") * n, "little")
    raw = (v + offset).to_bytes(n * nb, "little")
    half = 1 << (k - 1)
    out = [int.from_bytes(raw[i * nb:(i + 1) * nb], "little") - half for i in range(n)]
    return _strip(out)


def _mul_int(a: Sequence[int], b: Sequence[int]) -> list:
    if not a or not b:
        return []
    la, lb = len(a), len(b)
    if min(la, lb) <= _SCHOOLBOOK_CUTOFF:
        out = [0] * (la + lb - 1)
        if la < lb:
            a, b = b, a
        for j, bj in enumerate(b):
            if bj:
                for i, ai in enumerate(a):
                    out[i + j] += ai * bj
        return out
    k = _digit_bits(_maxbits(a) + _maxbits(b) + min(la, lb).bit_length() + 1)
    prod = gmpy2.mpz(_pack(a, k)) * gmpy2.mpz(_pack(b, k))
    out = _unpack(int(prod), k)
    out.extend([0] * (la + lb - 1 - len(out)))
    return out


def _exact_quo_int(a: Sequence[int], b: Sequence[int], verify: bool = False):
    """Quotient of a by b in Z[x], or None if (when verifying) b does not divide a."""
    la, lb = len(a), len(b)
    if lb == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if la < lb:
        return [] if la == 0 else None
    if lb == 1:
        d = b[0]
        if verify and any(x % d for x in a):
            return None
        return [x // d for x in a]
    dq = la - lb
    # coefficient bound for a factor of a (Mignotte), plus sign room
    k = _digit_bits(_maxbits(a) + dq + la.bit_length() + 2)
    big_a = gmpy2.mpz(_pack(a, k))
    big_b = gmpy2.mpz(_pack(b, k))
    q, r = gmpy2.t_divmod(big_a, big_b)
    if r:
        return None
    q = _unpack(int(q), k)
    if len(q) != dq + 1:
        return None
    if verify and _mul_int(q, b) != list(a):
        return None
    return q


def _content(c: Sequence[int]) -> int:
    g = 0
    for x in c:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g


def _primitive(c: list) -> list:
    if not c:
        return c
    g = _content(c)
    if c[-1] < 0:
        g = -g
    if g == 1:
        return c
    return [x // g for x in c]


def _prem(a: list, b: list) -> list:
    """Pseudo-remainder of a by b: lc(b)**(deg a - deg b + 1) * a mod b."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i, bi in enumerate(b):
            r[i + shift] -= lr * bi
        _strip(r)
        e -= 1
    if e > 0 and r:
        f = lb ** e
        r = [x * f for x in r]
    return r


def _subresultant_gcd_int(a: list, b: list) -> list:
    """Primitive gcd of primitive a, b via the subresultant PRS."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return _primitive(list(a))
    g = h = 1
    while True:
        d = len(a) - len(b)
        r = _prem(a, b)
        if not r:
            return _primitive(list(b))
        if len(r) == 1:
            return [1]
        div = g * h ** d
        a, b = b, [x // div for x in r]
        g = a[-1]
        if d == 0:
            pass
        elif d == 1:
            h = g
        else:
            h = g ** d // h ** (d - 1)


def _heu_gcd_int(a: list, b: list):
    """GCDHEU on primitive inputs; None when every evaluation point failed."""
    ba, bb = _maxbits(a), _maxbits(b)
    k = _digit_bits(max(2 * min(ba, bb) + 64, max(ba, bb) + 8))
    for _ in range(_HEU_ATTEMPTS):
        gam = gmpy2.gcd(gmpy2.mpz(_pack(a, k)), gmpy2.mpz(_pack(b, k)))
        h = _primitive(_unpack(int(gam), k))
        if h and _exact_quo_int(a, h, verify=True) is not None \
                and _exact_quo_int(b, h, verify=True) is not None:
            return h
        k *= 2
    return None


def _gcd_int(a: list, b: list) -> list:
    if not a:
        return list(b)
    if not b:
        return list(a)
    if len(a) == 1 or len(b) == 1:
        return [1]
    h = _heu_gcd_int(a, b)
    if h is None:
        h = _subresultant_gcd_int(a, b)
    return h


# -- the public polynomial type ---------------------------------------------

_ZERO = Fraction(0)
_ONE = Fraction(1)


class RationalPolynomial:
    """Immutable polynomial in Q[t].

    Coefficients are given lowest degree first and may be ints, Fractions or
    ``"p/q"`` strings.  ``coeffs`` gives them back as Fractions.

    >>> f = RationalPolynomial([-1, 0, 1])
    >>> f.degree, f(Fraction(3))
    (2, Fraction(8, 1))
    """

    __slots__ = ("_content", "_prim", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        fr = [as_fraction(c) for c in coeffs]
        while fr and not fr[-1]:
            fr.pop()
        if not fr:
            self._set(_ZERO, ())
            return
        den = 1
        for c in fr:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [c.numerator * (den // c.denominator) for c in fr]
        self._set_normalized(Fraction(1, den), ints)

    def _set(self, content, prim):
        self._content = content
        self._prim = prim
        self._hash = None

    def _set_normalized(self, scale: Fraction, ints: list):
        _strip(ints)
        if not ints:
            self._set(_ZERO, ())
            return
        g = _content(ints)
        if ints[-1] < 0:
            g = -g
        if g != 1:
            ints = [x // g for x in ints]
        self._set(scale * g, tuple(ints))

    @classmethod
    def _raw(cls, content: Fraction, prim: tuple) -> "RationalPolynomial":
        obj = cls.__new__(cls)
        obj._set(content if prim else _ZERO, prim)
        return obj

    @classmethod
    def _from_ints(cls, ints: list, scale: Fraction = _ONE) -> "RationalPolynomial":
        obj = cls.__new__(cls)
        obj._set_normalized(scale, list(ints))
        return obj

    @classmethod
    def constant(cls, c) -> "RationalPolynomial":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "RationalPolynomial":
        return cls([0] * degree + [c])

    @classmethod
    def t(cls) -> "RationalPolynomial":
        return cls([0, 1])

    # -- inspection --
    @property
    def coeffs(self) -> tuple:
        c = self._content
        return tuple(c * x for x in self._prim)

    @property
    def content(self) -> Fraction:
        """Signed content: ``self == content * primitive_part``."""
        return self._content

    @property
    def primitive_part(self) -> tuple:
        """Primitive integer coefficients with positive leading term."""
        return self._prim

    @property
    def degree(self):
        """Degree; the zero polynomial has degree ``-inf``."""
        return len(self._prim) - 1 if self._prim else -math.inf

    @property
    def leading_coefficient(self) -> Fraction:
        return self._content * self._prim[-1] if self._prim else _ZERO

    def is_zero(self) -> bool:
        return not self._prim

    def is_constant(self) -> bool:
        return len(self._prim) <= 1

    def __bool__(self):
        return bool(self._prim)

    def max_coeff_bits(self) -> int:
        return _maxbits(self._prim)

    # -- arithmetic --
    def _coerce(self, other):
        if isinstance(other, RationalPolynomial):
            return other
        try:
            return RationalPolynomial([other])
        except TypeError:
            return NotImplemented

    def __neg__(self):
        return RationalPolynomial._raw(-self._content, self._prim)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._prim:
            return self
        if not self._prim:
            return other
        ca, cb = self._content, other._content
        den = ca.denominator * cb.denominator // math.gcd(ca.denominator, cb.denominator)
        fa = ca.numerator * (den // ca.denominator)
        fb = cb.numerator * (den // cb.denominator)
        a, b = self._prim, other._prim
        if len(a) < len(b):
            a, b, fa, fb = b, a, fb, fa
        out = [fa * x for x in a]
        for i, y in enumerate(b):
            out[i] += fb * y
        return RationalPolynomial._from_ints(out, Fraction(1, den))

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
        if not isinstance(other, RationalPolynomial):
            try:
                c = as_fraction(other)
            except TypeError:
                return NotImplemented
            return RationalPolynomial._raw(self._content * c, self._prim) if c else RationalPolynomial()
        if not self._prim or not other._prim:
            return RationalPolynomial()
        prim = _mul_int(self._prim, other._prim)
        return RationalPolynomial._raw(self._content * other._content, tuple(prim))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = RationalPolynomial([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c) -> "RationalPolynomial":
        return self * as_fraction(c)

    def monic(self) -> "RationalPolynomial":
        if not self._prim:
            return self
        return RationalPolynomial._raw(Fraction(1, self._prim[-1]), self._prim)

    def exact_div(self, other: "RationalPolynomial") -> "RationalPolynomial":
        """Quotient when ``other`` divides ``self`` over Q; raises otherwise."""
        if not other._prim:
            raise ZeroDivisionError("polynomial division by zero")
        if not self._prim:
            return self
        q = _exact_quo_int(self._prim, other._prim, verify=True)
        if q is None:
            raise ValueError("divisor does not divide the polynomial exactly")
        return RationalPolynomial._raw(self._content / other._content, tuple(q))

    def divides(self, other: "RationalPolynomial") -> bool:
        if not self._prim:
            return not other._prim
        if not other._prim:
            return True
        return _exact_quo_int(other._prim, self._prim, verify=True) is not None

    def __divmod__(self, other):
        """Euclidean division over Q (long division; not used on hot paths)."""
        if not isinstance(other, RationalPolynomial):
            other = RationalPolynomial([other])
        if not other._prim:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        q = [_ZERO] * max(len(r) - db, 0)
        while len(r) - 1 >= db and r:
            c = r[-1] / b[-1]
            s = len(r) - 1 - db
            q[s] = c
            for i, bi in enumerate(b):
                r[i + s] -= c * bi
            r.pop()
            while r and not r[-1]:
                r.pop()
        return RationalPolynomial(q), RationalPolynomial(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "RationalPolynomial":
        if len(self._prim) <= 1:
            return RationalPolynomial()
        return RationalPolynomial._from_ints(
            [i * c for i, c in enumerate(self._prim)][1:], self._content)

    def __call__(self, r):
        """Evaluate at a rational number exactly."""
        r = as_fraction(r)
        if not self._prim:
            return _ZERO
        p, q = r.numerator, r.denominator
        acc = 0
        qpow = 1
        for c in reversed(self._prim):
            acc = acc * p + c * qpow
            qpow *= q
        return self._content * Fraction(acc, qpow // q)

    def compose(self, other: "RationalPolynomial") -> "RationalPolynomial":
        acc = RationalPolynomial()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    # -- comparison / hashing --
    def __eq__(self, other):
        if isinstance(other, RationalPolynomial):
            return self._prim == other._prim and self._content == other._content
        try:
            other = RationalPolynomial([other])
        except TypeError:
            return NotImplemented
        return self == other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._content, self._prim))
        return self._hash

    def sort_key(self):
        """Total order used to canonicalise bases: degree, then coefficients."""
        return (len(self._prim), self.coeffs)

    def __reduce__(self):
        return (RationalPolynomial._raw, (self._content, self._prim))

    def __repr__(self):
        return f"RationalPolynomial({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self._prim:
            return "0"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                cs = str(abs(c))
                if "/" in cs and mono:
                    cs = f"({cs})"
                body = cs + ("*" + mono if mono else "")
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def poly_gcd(f: RationalPolynomial, g: RationalPolynomial) -> RationalPolynomial:
    """Monic gcd of two polynomials over Q.

    >>> str(poly_gcd(RationalPolynomial([-1, 0, 1]), RationalPolynomial([-1, 0, 0, 1])))
    't - 1'
    """
    if f.is_zero() and g.is_zero():
        raise DegenerateInput("gcd(0, 0) is undefined")
    h = _gcd_int(list(f.primitive_part), list(g.primitive_part))
    return RationalPolynomial._raw(Fraction(1, h[-1]), tuple(h))


def subresultant_gcd(f: RationalPolynomial, g: RationalPolynomial) -> RationalPolynomial:
    """Monic gcd computed only through the subresultant PRS (reference route)."""
    if f.is_zero() and g.is_zero():
        raise DegenerateInput("gcd(0, 0) is undefined")
    a, b = list(f.primitive_part), list(g.primitive_part)
    if not a or not b:
        h = a or b
    else:
        h = _subresultant_gcd_int(a, b)
    return RationalPolynomial._raw(Fraction(1, h[-1]), tuple(h))


def poly_lcm(f: RationalPolynomial, g: RationalPolynomial) -> RationalPolynomial:
    if f.is_zero() or g.is_zero():
        return RationalPolynomial()
    return (f * g.exact_div(poly_gcd(f, g))).monic()


def squarefree_decompose(f: RationalPolynomial) -> list:
    """Yun's algorithm: ``[(g_i, m_i)]`` with f = lc(f) * prod g_i**m_i.

    The g_i are monic, squarefree, pairwise coprime, and the m_i increase.
    """
    if f.is_zero():
        raise DegenerateInput("squarefree decomposition of the zero polynomial")
    if f.is_constant():
        return []
    out = []
    df = f.derivative()
    a0 = poly_gcd(f, df)
    b = f.exact_div(a0)
    c = df.exact_div(a0)
    d = c - b.derivative()
    i = 1
    while not b.is_constant():
        a = poly_gcd(b, d)
        if not a.is_constant():
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out
