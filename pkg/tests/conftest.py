from fractions import Fraction

import pytest
from hypothesis import strategies as st

from ellgcd.corpus import constant_pair, running_pair
from ellgcd.polynomial import RationalPolynomial

T = RationalPolynomial.t()


def poly(*coeffs):
    return RationalPolynomial(list(coeffs))


small_rationals = st.builds(
    Fraction,
    st.integers(min_value=-30, max_value=30),
    st.integers(min_value=1, max_value=6),
)


def polys(max_degree=8, min_degree=0):
    return st.lists(small_rationals, min_size=min_degree + 1, max_size=max_degree + 1).map(RationalPolynomial)


def nonzero_polys(max_degree=8):
    return polys(max_degree).filter(lambda p: not p.is_zero())


@pytest.fixture(scope="session")
def pair():
    return running_pair()


@pytest.fixture(scope="session")
def const_pair():
    return constant_pair()
