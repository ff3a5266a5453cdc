import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anorm import (ComputationLimit, Ideal, Poly, RingMismatchError, buchberger, divide, eliminate, ideal_equal,
                   limits, member, normal_form, parse_poly, radical_member, saturate)
from anorm.corpus import groebner_soundness, random_ideals
from anorm.poly import GREVLEX, LEX, MonomialOrder

from conftest import polys

R = ("x", "y")
Y_FIRST = MonomialOrder("lex", priority=[1, 0])


def P(text, ring=R):
    return parse_poly(text, ring)


def test_division_with_y_leading():
    qs, r = divide(P("y^4"), [P("y^2 - x^3")], Y_FIRST)
    assert r == P("x^6")
    assert qs[0] * P("y^2 - x^3") + r == P("y^4")


def test_normal_form_on_cusp():
    B = buchberger(Ideal(R, [P("y^2 - x^3")]), Y_FIRST)
    assert normal_form(P("2*y^2"), B) == P("2*x^3")


def test_division_remainder_terms_not_divisible():
    f = P("x^2*y + x*y^2 + y^2")
    ds = [P("x*y - 1"), P("y^2 - 1")]
    qs, r = divide(f, ds, LEX)
    assert sum((q * d for q, d in zip(qs, ds)), r) == f
    assert r == P("x + y + 1")


def test_reduced_basis_of_twisted_cubic():
    I = Ideal(("x", "y", "z"), [P("y - x^2", ("x", "y", "z")), P("z - x^3", ("x", "y", "z"))])
    tb = buchberger(I, GREVLEX)
    assert tb.check_representation()
    for g in I.generators:
        assert normal_form(g, tb).is_zero()


def test_unit_ideal():
    I = Ideal(R, [P("x"), P("x - 1")])
    assert I.is_unit()
    ok, cofs = member(P("1"), I)
    assert ok and cofs[0] * P("x") + cofs[1] * P("x - 1") == 1


def test_membership_negative_witness():
    ok, cofs = member(P("y"), Ideal(R, [P("x"), P("y^2 - x^3")]))
    assert not ok and cofs is None


def test_membership_cofactors_reexpand():
    I = Ideal(R, [P("x"), P("y^2 - x^3")])
    ok, cofs = member(P("y^2"), I)
    assert ok
    assert sum((c * g for c, g in zip(cofs, I.generators)), Poly.zero(R)) == P("y^2")


def test_elimination():
    S = ("x", "y", "z")
    I = Ideal(S, [P("y - x^2", S), P("z - x^3", S)])
    J = eliminate(I, ["y", "z"])
    assert J.ring == ("y", "z")
    assert ideal_equal(J, Ideal(("y", "z"), [P("y^3 - z^2", ("y", "z"))]))


def test_saturation():
    I = Ideal(R, [P("x*y"), P("x^2")])
    assert ideal_equal(saturate(I, P("x")), Ideal(R, [P("1")]))
    assert ideal_equal(saturate(Ideal(R, [P("x*y")]), P("x")), Ideal(R, [P("y")]))


def test_radical_membership():
    ok, n, cofs = radical_member(P("x"), Ideal(R, [P("x^2")]))
    assert ok and n == 2
    ok, n, cofs = radical_member(P("x + 1"), Ideal(R, [P("x"), P("y")]))
    assert not ok and n is None


def test_radical_membership_on_cusp():
    I = Ideal(R, [P("x"), P("y^2 - x^3")])
    ok, n, cofs = radical_member(P("y"), I)
    assert ok and n == 2
    assert sum((c * g for c, g in zip(cofs, I.generators)), Poly.zero(R)) == P("y^2")


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        normal_form(P("x", ("x",)), Ideal(R, [P("x")]).groebner())


def test_pair_cap():
    S = ("x", "y", "z")
    gens = [P("x^3 - y*z + 1", S), P("y^3 - x*z - 2", S), P("z^3 - x*y + 3", S)]
    with limits(max_pairs=2):
        with pytest.raises(ComputationLimit):
            Ideal(S, gens).groebner()


def test_bit_cap():
    with limits(max_bits=4):
        with pytest.raises(ComputationLimit):
            Ideal(R, [P("x^2 - 123456789*y"), P("x*y - 987654321")]).groebner()


def test_seeded_random_ideals_are_sound():
    ideals = random_ideals(seed=0, count=100)
    counts = groebner_soundness(ideals, seed=0)
    assert counts == {k: 100 for k in counts}


@settings(max_examples=40, deadline=None)
@given(st.lists(polys(), min_size=1, max_size=3), st.randoms(use_true_random=False))
def test_basis_is_independent_of_generator_order(gens, rnd):
    I = Ideal(("x", "y", "z"), gens)
    if I.is_zero():
        return
    with limits(max_pairs=2000, max_bits=4000):
        try:
            a = I.groebner()
            shuffled = list(gens)
            rnd.shuffle(shuffled)
            b = Ideal(("x", "y", "z"), shuffled).groebner()
        except ComputationLimit:
            return
    assert a.basis == b.basis


@settings(max_examples=40, deadline=None)
@given(polys(), polys(), polys())
def test_products_are_members(a, f, g):
    I = Ideal(("x", "y", "z"), [f, g])
    if I.is_zero():
        return
    with limits(max_pairs=2000, max_bits=4000):
        try:
            ok, cofs = member(a * f + g, I)
        except ComputationLimit:
            return
    assert ok
