import pytest

from anorm import (CAlgFunction, Certificate, InputError, NoCertificate, certificate, graph_ideal, parse_poly,
                   unit_ideal_check, verify_certificate)

from conftest import fn

R = ("x", "y")


def P(text, ring=R):
    return parse_poly(text, ring)


@pytest.fixture
def cusp_graph(cusp):
    return graph_ideal(cusp, [fn(cusp, "y", "x")])


def test_y_vanishes_where_x_does(cusp, cusp_graph):
    g, fs = fn(cusp, "y"), [fn(cusp, "x")]
    C = certificate(g, fs, cusp_graph)
    assert C.verified
    assert C.n <= 2
    assert verify_certificate(g, fs, C, cusp)
    assert C.q_list[0].equivalent(fn(cusp, "y", "x"))


def test_certificate_json_fields(cusp, cusp_graph):
    d = certificate(fn(cusp, "y"), [fn(cusp, "x")], cusp_graph).to_dict()
    assert d["n"] == 1
    assert d["q"] == [{"num": "y", "den": "x"}]
    assert d["verified"] is True


def test_tampered_certificates_fail(cusp, cusp_graph):
    g, fs = fn(cusp, "y"), [fn(cusp, "x")]
    C = certificate(g, fs, cusp_graph)
    wrong_q = Certificate(C.n, [fn(cusp, "y + 1", "x")], C.ambient_exponent, C.ambient_cofactors, C.graph_cofactors)
    wrong_n = Certificate(C.n + 1, C.q_list, C.ambient_exponent, C.ambient_cofactors, C.graph_cofactors)
    assert not verify_certificate(g, fs, wrong_q, cusp)
    assert not verify_certificate(g, fs, wrong_n, cusp)
    assert not verify_certificate(g, fs + fs, C, cusp)


def test_common_zero_means_no_certificate(cusp, cusp_graph):
    with pytest.raises(NoCertificate, match="no certificate: radical membership failed") as info:
        certificate(fn(cusp, "x + 1"), [fn(cusp, "x"), fn(cusp, "y")], cusp_graph)
    assert info.value.stage == "radical_membership"


def test_unit_ideal(cusp, cusp_graph):
    fs = [fn(cusp, "x - 1"), fn(cusp, "y")]
    C = unit_ideal_check(fs, cusp_graph)
    assert verify_certificate(fn(cusp, "1"), fs, C, cusp)
    assert C.q_list[0].num == P("-x - 1")


def test_unit_ideal_fails_with_a_common_zero(cusp, cusp_graph):
    with pytest.raises(NoCertificate):
        unit_ideal_check([fn(cusp, "x"), fn(cusp, "y")], cusp_graph)


def test_rational_members(cusp, cusp_graph):
    # y/x vanishes exactly where y does on the cusp
    g, fs = fn(cusp, "y"), [fn(cusp, "y", "x")]
    C = certificate(g, fs, cusp_graph)
    assert verify_certificate(g, fs, C, cusp)


def test_cross_needs_a_power(cross):
    N = graph_ideal(cross, [])
    g, fs = fn(cross, "x"), [fn(cross, "x + y")]
    C = certificate(g, fs, N)
    assert C.n == 2
    assert verify_certificate(g, fs, C, cross)


def test_extension_failure_is_reported(cusp):
    N = graph_ideal(cusp, [])
    with pytest.raises(NoCertificate) as info:
        certificate(fn(cusp, "y", "x"), [fn(cusp, "x")], N)
    assert info.value.stage == "extension"


def test_needs_members(cusp, cusp_graph):
    with pytest.raises(InputError):
        certificate(fn(cusp, "y"), [], cusp_graph)


def test_members_on_another_set_are_rejected(cusp, cross, cusp_graph):
    with pytest.raises(InputError):
        certificate(fn(cusp, "y"), [fn(cross, "x")], cusp_graph)
