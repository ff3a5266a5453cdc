from fractions import Fraction

import pytest
from hypothesis import strategies as st

from anorm import CAlgFunction, Poly, VarietyModel


@pytest.fixture
def cusp():
    return VarietyModel.from_strings(["x", "y"], ["y^2 - x^3"], 1, name="cusp")


@pytest.fixture
def node():
    return VarietyModel.from_strings(["x", "y"], ["y^2 - x^3 - x^2"], 1, name="node")


@pytest.fixture
def cross():
    return VarietyModel.from_strings(["x", "y"], ["x*y"], 1, name="cross")


@pytest.fixture
def twisted_cubic():
    return VarietyModel.from_strings(["x", "y", "z"], ["y - x^2", "z - x^3"], 1, name="twisted_cubic")


@pytest.fixture
def plane():
    return VarietyModel.from_strings(["x", "y"], [], 2, name="plane")


def fn(A, num, den="1", name=None):
    return CAlgFunction(A, num, den, name=name)


RING = ("x", "y", "z")

coefficients = st.fractions(min_value=-20, max_value=20, max_denominator=6)
monomials = st.tuples(*[st.integers(0, 3)] * len(RING))


@st.composite
def polys(draw, ring=RING, max_terms=5):
    terms = draw(st.dictionaries(st.tuples(*[st.integers(0, 3)] * len(ring)), coefficients, max_size=max_terms))
    return Poly(ring, terms)
