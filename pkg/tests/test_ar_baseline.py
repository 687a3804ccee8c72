from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellgcd.ar_baseline import ArConfig, ar_bound_scan, ar_gcd, multiplicative_dependence_check
from ellgcd.errors import DegenerateInput, DependentInputs
from ellgcd.polynomial import RationalPolynomial, poly_gcd

from conftest import T, poly

CYC6 = T ** 2 + T + 1
STANDARD = ArConfig(T, T + 1)


def test_examples():
    assert ar_gcd(STANDARD, 6, 6) == CYC6
    assert ar_gcd(STANDARD, 4, 4) == poly(1)
    same = ArConfig(T, T)
    for n in (1, 4, 7):
        assert ar_gcd(same, n, n) == T ** n - 1


def test_diagonal_pattern():
    for n in range(1, 37):
        assert ar_gcd(STANDARD, n, n) == (CYC6 if n % 6 == 0 else poly(1))


def test_root_of_unity_oracle():
    # x and x + 1 both roots of unity forces x = exp(+-2 pi i / 3); check numerically
    import cmath
    for k in range(1, 6):
        z = cmath.exp(2j * cmath.pi * k / 6)
        both = abs(abs(z + 1) - 1) < 1e-12
        assert both == (k in (2, 4))


def test_scan():
    scan = ar_bound_scan(STANDARD, 36)
    assert scan.h_candidate == CYC6
    assert all(r.gcd.divides(scan.h_candidate) for r in scan.rows)
    assert ar_bound_scan(STANDARD, 18).h_candidate == scan.h_candidate
    cfg = ArConfig(T ** 2 + 3, 2 * T - 1)
    assert ar_bound_scan(cfg, 1).h_candidate == poly_gcd(cfg.a - 1, cfg.b - 1)


def test_dependent_rejected():
    with pytest.raises(DependentInputs):
        ar_bound_scan(ArConfig(T ** 2, T ** 3), 5)


def test_constant_rejected():
    with pytest.raises(ValueError):
        ArConfig(poly(3), T)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(-3, 3), st.integers(1, 3))
def test_gcd_divides_both(n1, n2, c, d):
    cfg = ArConfig(T + c, T ** d - 2)
    g = ar_gcd(cfg, n1, n2)
    assert g.divides(cfg.a ** n1 - 1) and g.divides(cfg.b ** n2 - 1)


class TestDependence:
    def test_powers(self):
        dep = multiplicative_dependence_check(T ** 2, T ** 3)
        assert dep.dependent and dep.exponents == (3, -2)

    def test_scalar(self):
        dep = multiplicative_dependence_check(2 * T, T)
        assert dep.dependent and dep.exponents == (1, -1) and dep.constant == 2

    def test_independent(self):
        assert not multiplicative_dependence_check(T, T + 1).dependent

    def test_zero(self):
        with pytest.raises(DegenerateInput):
            multiplicative_dependence_check(poly(), T)

    @given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(-2, 2))
    def test_certificate_verifies(self, i, j, k, c):
        base = (T + c) * (T ** 2 + 1) ** k
        a, b = base ** i * 3, base ** j
        dep = multiplicative_dependence_check(a, b)
        assert dep.dependent
        p, q = dep.exponents
        num = (a ** p if p >= 0 else poly(1)) * (b ** q if q >= 0 else poly(1))
        den = (a ** -p if p < 0 else poly(1)) * (b ** -q if q < 0 else poly(1))
        ratio, rem = divmod(num, den)
        assert rem.is_zero() and ratio.is_constant()
        assert ratio.coeffs[0] == dep.constant
