"""End-to-end acceptance criteria with their time budgets.

Each test records a PASS/FAIL line that is printed once the module finishes;
``python3 tests/test_acceptance.py`` runs the same checks without pytest.
"""

import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from anorm import (CAlgFunction, Certificate, GrowthConfig, Ideal, NoCertificate, VarietyModel, certificate,
                   check_prop52, eliminate, estimate_growth, graph_ideal, ideal_equal, member, normal_form,
                   parse_poly, represent, unit_ideal_check, universal_denominator, verify_anormal_instance,
                   verify_certificate)
from anorm.corpus import groebner_soundness, random_ideals

R = ("x", "y")
G = ("x", "y", "w")
RESULTS = []


def P(text, ring=R):
    return parse_poly(text, ring)


def cusp():
    return VarietyModel.from_strings(["x", "y"], ["y^2 - x^3"], 1, name="cusp")


def cross():
    return VarietyModel.from_strings(["x", "y"], ["x*y"], 1, name="cross")


def fn(A, num, den="1"):
    return CAlgFunction(A, num, den)


class Criterion:
    """Times a block; the block must finish within ``budget`` seconds."""

    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.budget
        RESULTS.append(f"criterion {self.number:>2} {'PASS' if ok else 'FAIL'}  {self.title}  "
                       f"({elapsed:.2f}s, budget {self.budget:g}s)")
        if exc_type is None:
            assert elapsed < self.budget, f"took {elapsed:.2f}s, budget {self.budget}s"
        return False


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    write = reporter.write_line if reporter else print
    write("")
    for line in sorted(RESULTS):
        write(line)


def test_c01_universal_denominator():
    with Criterion(1, "universal denominator on the cusp", 1.0):
        A = cusp()
        D = universal_denominator(A)
        assert D.Q == P("2*y")
        Rf = represent(fn(A, "y", "x"), D)
        assert Rf == P("2*x^2")
        assert normal_form(Rf * P("x") - P("y") * D.Q, A.ideal.groebner()).is_zero()
        assert A.contains(P("2*x^2*x - y*2*y"))


def test_c02_non_anormality_witness():
    with Criterion(2, "y is not in <x> + <y^2 - x^3>", 1.0):
        ok, _ = member(P("y"), Ideal(R, [P("x"), P("y^2 - x^3")]))
        assert ok is False


def test_c03_canonical_anormalisation():
    with Criterion(3, "graph of y/x equals the parametrized curve", 5.0):
        A = cusp()
        N = graph_ideal(A, [fn(A, "y", "x")])
        oracle = Ideal(G, [P("x - w^2", G), P("y - w^3", G)])
        assert ideal_equal(N.graph_ideal, oracle)
        assert ideal_equal(eliminate(N.graph_ideal, R), A.ideal)
        # the oracle vanishes on t -> (t^2, t^3, t) for several t
        for t in range(-3, 4):
            assert all(g.evaluate([t * t, t ** 3, t]) == 0 for g in N.graph_ideal.generators)


def test_c04_cross_is_anormal():
    with Criterion(4, "cross is a-normal on its corpus; empty list is identity", 1.0):
        A = cross()
        corpus = [fn(A, "x*(x^2 - 2*x + 5) + y*(3*y^3 - y) + 4"), fn(A, "x + y + 1"), fn(A, "2*x^4 - 7")]
        report = verify_anormal_instance(A, corpus)
        assert report.status == "ok"
        N = graph_ideal(A, [])
        assert N.is_identity() and ideal_equal(N.graph_ideal, A.ideal)


def test_c05_nullstellensatz_certificate():
    with Criterion(5, "certificate for y over [x]; tampering and common zeros fail", 5.0):
        A = cusp()
        N = graph_ideal(A, [fn(A, "y", "x")])
        g, fs = fn(A, "y"), [fn(A, "x")]
        C = certificate(g, fs, N)
        assert C.verified and C.n <= 2
        assert verify_certificate(g, fs, C, A)
        bad = Certificate(C.n, [fn(A, "y", "x^2")], C.ambient_exponent, C.ambient_cofactors, C.graph_cofactors)
        assert not verify_certificate(g, fs, bad, A)
        with pytest.raises(NoCertificate, match="no certificate"):
            certificate(fn(A, "x + 1"), [fn(A, "x"), fn(A, "y")], N)


def test_c06_unit_ideal():
    with Criterion(6, "1 = q1 (x - 1) + q2 y on the cusp", 5.0):
        A = cusp()
        N = graph_ideal(A, [fn(A, "y", "x")])
        fs = [fn(A, "x - 1"), fn(A, "y")]
        C = unit_ideal_check(fs, N)
        assert verify_certificate(fn(A, "1"), fs, C, A)


def test_c07_growth_exponents():
    with Criterion(7, "growth exponents 1/3 (y/x on the cusp) and 3 (x^2*y on the plane)", 10.0):
        cfg = GrowthConfig(rmin=10, rmax=1e6, decades=5, samples=4, seed=0)
        est = estimate_growth(fn(cusp(), "y", "x"), cfg=cfg)
        assert est.snapped == Fraction(1, 3)
        assert abs(est.slope - 1 / 3) <= 0.05
        plane = VarietyModel.from_strings(["x", "y"], [], 2)
        est = estimate_growth(fn(plane, "x^2*y"), cfg=cfg)
        assert est.snapped == 3
        assert abs(est.slope - 3) <= 0.05


def test_c08_prop52_sandwich():
    with Criterion(8, "growth sandwich for y/x through its graph", 20.0):
        A = cusp()
        N = graph_ideal(A, [fn(A, "y", "x")])
        report = check_prop52(fn(A, "y", "x"), N, GrowthConfig(seed=0, epsilon=0.1))
        p = report.payload
        for est in [p["B_f"], p["B_fhat"]] + p["B_h"]:
            assert abs(est["slope"] - 1 / 3) <= 0.05
        assert p["upper_holds"] and p["lower_holds"]
        assert report.status == "ok"


def test_c09_groebner_soundness():
    with Criterion(9, "Groebner engine on the corpus and 100 random ideals", 60.0):
        S = ("x", "y", "z")
        corpus = [cusp().ideal, cross().ideal, Ideal(R, [P("y^2 - x^3 - x^2")]),
                  Ideal(S, [P("y - x^2", S), P("z - x^3", S)])]
        ideals = corpus + random_ideals(seed=0, count=100)
        counts = groebner_soundness(ideals, seed=0)
        assert counts == {k: len(ideals) for k in counts}


def test_c10_selftest_determinism():
    with Criterion(10, "selftest --json is bitwise identical across runs", 120.0):
        cmd = [sys.executable, "-m", "anorm.cli", "selftest", "--json", "--seed", "0"]
        first = subprocess.run(cmd, capture_output=True, timeout=120)
        second = subprocess.run(cmd, capture_output=True, timeout=120)
        assert first.returncode == 0 and second.returncode == 0
        assert first.stdout == second.stdout and first.stdout


if __name__ == "__main__":
    failures = 0
    for name, func in sorted(globals().items()):
        if name.startswith("test_c") and callable(func):
            try:
                func()
            except Exception:
                failures += 1
    for line in sorted(RESULTS):
        print(line)
    sys.exit(1 if failures else 0)
