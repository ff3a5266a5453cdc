import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from anorm import (CAlgFunction, InputError, Poly, VarietyModel, VerificationError, check_denominator,
                   minimal_unitary_poly, parse_poly, represent, universal_denominator)
from anorm.poly import content_normalize
from anorm.variety import build_frame

from conftest import fn

R = ("x", "y")


def P(text, ring=R):
    return parse_poly(text, ring)


def test_cusp_denominator(cusp):
    D = universal_denominator(cusp)
    assert D.Q == P("2*y")
    assert D.P == P("y^2 - x^3")
    assert D.d == 2


def test_cusp_represent(cusp):
    D = universal_denominator(cusp)
    f = fn(cusp, "y", "x")
    R_ = represent(f, D)
    assert R_ == P("2*x^2")
    assert cusp.contains(R_ * P("x") - P("y") * D.Q)


def test_cross_explicit_frame(cross):
    half = mpq(1, 2)
    fr = build_frame(cross, [[half, half], [half, -half]])
    D = universal_denominator(cross, frame=fr)
    assert content_normalize(D.Q) == P("x - y")
    assert D.Q == P("2*x - 2*y")


def test_cross_seeded_frame_denominator(cross):
    D = universal_denominator(cross, seed=0)
    assert not cross.contains(D.Q)
    assert D.d == 2
    # every polynomial function is representable with R = p * Q
    assert represent(fn(cross, "x^2 + y"), D) == P("x^2 + y") * D.Q


def test_node(node):
    D = universal_denominator(node)
    f = fn(node, "y", "x")
    assert node.contains(represent(f, D) * P("x") - P("y") * D.Q)


def test_twisted_cubic_is_already_normal(twisted_cubic):
    D = universal_denominator(twisted_cubic)
    assert D.Q == 1


def test_full_space(plane):
    D = universal_denominator(plane)
    assert D.Q == 1
    assert minimal_unitary_poly(plane).ring == ("x", "y", "t")


def test_not_representable_reports_failure(cusp):
    # 1/x is not bounded near the origin, so x does not divide y * Q modulo the cusp
    D = universal_denominator(cusp)
    with pytest.raises(VerificationError) as info:
        represent(fn(cusp, "1", "x"), D)
    assert info.value.stage == "represent"


def test_denominator_vanishing_on_the_set(cusp):
    with pytest.raises(InputError):
        fn(cusp, "x", "y^2 - x^3")


def test_zero_denominator():
    A = VarietyModel.from_strings(["x"], [], 1)
    with pytest.raises(InputError):
        CAlgFunction(A, "x", "0")


def test_check_denominator_report(cusp):
    D = universal_denominator(cusp)
    report = check_denominator(D, [fn(cusp, "y", "x", "f"), fn(cusp, "1", "x", "g")])
    assert report.status == "fail"
    assert report.payload["nonvanishing"] is True
    assert [e["status"] for e in report.payload["functions"]] == ["ok", "fail"]
    assert report.payload["Q"] == "2*y"


def test_function_equivalence(cusp):
    a = fn(cusp, "y", "x")
    b = fn(cusp, "x^2", "y")
    assert a.equivalent(b)
    assert not a.equivalent(fn(cusp, "x"))


def test_simplified_finds_polynomial_presentation(cusp):
    f = fn(cusp, "y^2", "x")
    g = f.simplified()
    assert g.is_polynomial() and g.num == P("x^2")


def test_module_coordinates_checked(cusp):
    h = fn(cusp, "y", "x")
    ok = CAlgFunction(cusp, "y", "1", module_coords=["0", "x"], generators=[h])
    assert ok.check_module_coords()
    with pytest.raises(VerificationError):
        CAlgFunction(cusp, "y", "1", module_coords=["0", "1"], generators=[h])


@settings(max_examples=25, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 3))
def test_rational_functions_of_the_normalisation_are_represented(a, b, k):
    # f = a + b*(y/x)^k is c-holomorphic on the cusp; it must have the form R/Q
    A = VarietyModel.from_strings(["x", "y"], ["y^2 - x^3"], 1)
    f = CAlgFunction(A, P(f"{a}*x^{k} + {b}*y^{k}"), P(f"x^{k}"))
    D = universal_denominator(A)
    R_ = represent(f, D)
    assert A.contains(R_ * f.den - f.num * D.Q)
