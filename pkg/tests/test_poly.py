from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings

from anorm import InputError, Poly, parse_poly
from anorm.poly import (DEGREE_OF_ZERO, GREVLEX, LEX, MonomialOrder, content_normalize, fresh_name,
                        invert_matrix, linear_change, monic, partial_derivative, substitute)

from conftest import RING, polys

R = ("x", "y")


def P(text, ring=R):
    return parse_poly(text, ring)


def test_zero_and_constants():
    z = Poly.zero(R)
    assert z.is_zero() and not z
    assert z.degree() is DEGREE_OF_ZERO
    assert Poly.const(R, Fraction(3, 4)).constant_value() == mpq(3, 4)
    assert Poly.one(R) == 1


def test_cancellation_drops_terms():
    assert (P("x + y") - P("x")).terms == {(0, 1): mpq(1)}
    assert P("x - x").is_zero()


def test_binomial_expansion():
    assert P("(x+y)^2 - x^2 - 2*x*y") == P("y^2")


def test_degrees():
    p = P("x^3*y + y^2")
    assert p.degree() == 4
    assert p.degree_in("x") == 3 and p.degree_in("y") == 2
    assert p.variables() == ("x", "y")


def test_leading_terms_depend_on_order():
    p = P("y^2 - x^3")
    assert p.leading_monomial(GREVLEX) == (3, 0)
    assert p.leading_monomial(MonomialOrder("lex", priority=[1, 0])) == (0, 2)
    assert p.leading_monomial(LEX) == (3, 0)


def test_block_order_eliminates_first_block():
    order = MonomialOrder.block([0], [1])
    p = P("x + y^5")
    assert p.leading_monomial(order) == (1, 0)


def test_derivative_and_substitution():
    p = P("y^2 - x^3")
    assert partial_derivative(p, "y") == P("2*y")
    assert partial_derivative(p, "x") == P("-3*x^2")
    t = ("t",)
    s = substitute(p, {"x": P("t^2", t), "y": P("t^3", t)}, t)
    assert s.is_zero()


def test_exact_evaluation():
    assert P("y^2 - x^3").evaluate({"x": 4, "y": 8}) == 0
    assert P("1/2*x + 1/3").evaluate([1, 0]) == mpq(5, 6)


def test_division_by_scalar_and_zero():
    assert P("2*x") / 2 == P("x")
    with pytest.raises(ZeroDivisionError):
        P("x") / 0


def test_negative_power_rejected():
    with pytest.raises((InputError, ValueError)):
        P("x") ** -1


def test_linear_change_roundtrip():
    L = [[1, 2], [0, 1]]
    Linv = invert_matrix(L)
    p = P("y^2 - x^3 + x*y")
    assert linear_change(linear_change(p, L), Linv) == p


def test_singular_matrix_rejected():
    with pytest.raises(InputError):
        invert_matrix([[1, 2], [2, 4]])


def test_content_normalize():
    assert content_normalize(P("-1/2*x^2 + 3/4*y")) == P("2*x^2 - 3*y")
    with pytest.raises(InputError):
        content_normalize(Poly.zero(R))
    assert monic(P("3*x + 6")) == P("x + 2")


def test_change_ring_by_name():
    p = P("x*y")
    q = p.change_ring(("y", "w", "x"))
    assert q.terms == {(1, 0, 1): mpq(1)}
    with pytest.raises(InputError):
        P("x").change_ring(("y",))


def test_fresh_name():
    assert fresh_name("w", ["x", "y"]) == "w"
    assert fresh_name("w", ["w", "w_"]) == "w__"


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_evaluation_is_a_homomorphism(a, b):
    pt = {"x": mpq(1, 2), "y": mpq(-3), "z": mpq(2, 5)}
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


@settings(max_examples=40, deadline=None)
@given(polys())
def test_complex_evaluation_matches_exact(a):
    pt = [mpq(1, 3), mpq(-2), mpq(5, 4)]
    exact = float(a.evaluate(pt))
    assert abs(a.evaluate_complex([complex(float(v)) for v in pt]) - exact) <= 1e-9 * max(1.0, abs(exact)) + 1e-9 * a.absolute_scale([complex(float(v)) for v in pt])
