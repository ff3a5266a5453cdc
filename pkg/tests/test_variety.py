import random
import warnings

import pytest
from gmpy2 import mpq

from anorm import ComputationLimit, Ideal, InputError, VarietyModel, parse_poly
from anorm.numeric import FiberCountWarning, fiber_solve
from anorm.variety import build_frame, covering_number, dimension, noether_frame, properness_check

R = ("x", "y")


def P(text, ring=R):
    return parse_poly(text, ring)


@pytest.mark.parametrize("gens, ring, dim", [
    (["y^2 - x^3"], R, 1),
    (["x*y"], R, 1),
    ([], R, 2),
    (["x", "y"], R, 0),
    (["y - x^2", "z - x^3"], ("x", "y", "z"), 1),
    (["x*z", "y*z"], ("x", "y", "z"), 2),
])
def test_dimension(gens, ring, dim):
    assert dimension(Ideal(ring, [P(g, ring) for g in gens])) == dim


def test_unit_ideal_has_no_dimension():
    with pytest.raises(InputError, match="unit ideal"):
        dimension(Ideal(R, [P("1")]))


def test_wrong_asserted_dimension_is_rejected():
    with pytest.raises(InputError, match="computed 1"):
        VarietyModel.from_strings(["x", "y"], ["y^2 - x^3"], 2)


def test_duplicate_variables_rejected():
    with pytest.raises(InputError):
        VarietyModel(["x", "x"], [], 2)


def test_membership(cusp):
    assert cusp.contains(P("y^4 - x^6"))
    assert not cusp.contains(P("y"))
    assert cusp.reduce(P("x^3")) == cusp.reduce(P("y^2"))


def test_cusp_frame_is_identity(cusp):
    fr = noether_frame(cusp)
    assert fr.is_identity()
    assert fr.d == 2
    assert fr.t_var == "y"
    assert fr.unitary == P("y^2 - x^3")


def test_twisted_cubic_frame(twisted_cubic):
    fr = twisted_cubic.frame()
    assert fr.k == 1 and fr.d == 1
    assert set(fr.witnesses) == {"y", "z"}


def test_cross_needs_a_coordinate_change(cross):
    assert properness_check(cross.ideal, k=1) is None
    fr = cross.frame(seed=0)
    assert not fr.is_identity()
    assert fr.d == 2
    assert covering_number(fr, A=cross) == 2


def test_frame_search_is_deterministic(cross):
    a = noether_frame(cross, seed=3)
    b = noether_frame(cross, seed=3)
    assert a.L == b.L


def test_properness_with_named_base():
    I = Ideal(R, [P("y^2 - x^3")])
    w = properness_check(I, base=["x"])
    assert w["y"] == P("y^2 - x^3")
    # over y the set is also finite: x^3 = y^2 is monic in x
    assert properness_check(I, base=["y"]) is not None
    assert properness_check(Ideal(R, [P("x*y - 1")]), base=["x"]) is None


def test_frame_round_trip(cross):
    fr = cross.frame()
    p = P("x^2 + 3*x*y - y")
    assert fr.to_original(fr.to_frame(p)) == p


def test_full_space_frame(plane):
    fr = plane.frame()
    assert fr.k == 2 and fr.d == 1 and fr.t_var is None


def test_points_are_finite_set():
    A = VarietyModel.from_strings(["x", "y"], ["x^2 - 1", "y - x"], 0)
    fr = A.frame()
    pts = fiber_solve(fr, A, [])
    assert sorted(round(p[0].real) for p in pts) == [-1, 1]


def test_fiber_points_lie_on_the_set(node):
    fr = node.frame()
    pts = fiber_solve(fr, node, [mpq(5, 2)])
    assert len(pts) == fr.d
    for x, y in pts:
        assert abs(y * y - x ** 3 - x ** 2) < 1e-8 * 20


def test_fiber_count_warning_at_the_singular_point(cusp):
    fr = cusp.frame()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        pts = fiber_solve(fr, cusp, [0], expected=2)
    assert len(pts) == 1
    assert any(issubclass(w.category, FiberCountWarning) for w in caught)


def test_no_frame_within_attempts(cross):
    with pytest.raises(ComputationLimit):
        noether_frame(cross, max_attempts=0)
