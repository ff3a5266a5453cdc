"""Golden corpus for ``anorm selftest``: cusp, node, cross, twisted cubic and the plane.

Each case computes a small dictionary of exact (or snapped) observations; the
self-test compares it to the golden file shipped with the package.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List, Optional

from .anormalizer import graph_ideal, verify_anormal_instance
from .denominator import CAlgFunction, represent, universal_denominator
from .exceptions import AnormError, InputError
from .expr_io import Report, print_canonical
from .groebner import GREVLEX, Ideal, divide, ideal_equal, member, normal_form
from .growth import GrowthConfig, check_prop52, estimate_growth
from .nullsatz import NoCertificate, certificate, unit_ideal_check, verify_certificate
from .poly import Poly
from .variety import VarietyModel

__all__ = ["CorpusCase", "CASES", "run_selftest", "load_golden", "random_ideals", "groebner_soundness"]


@dataclass(frozen=True)
class CorpusCase:
    name: str
    kind: str
    run: Callable[[int], dict]


def cusp() -> VarietyModel:
    return VarietyModel.from_strings(["x", "y"], ["y^2 - x^3"], 1, name="cusp")


def node() -> VarietyModel:
    return VarietyModel.from_strings(["x", "y"], ["y^2 - x^3 - x^2"], 1, name="node")


def cross() -> VarietyModel:
    return VarietyModel.from_strings(["x", "y"], ["x*y"], 1, name="cross")


def twisted_cubic() -> VarietyModel:
    return VarietyModel.from_strings(["x", "y", "z"], ["y - x^2", "z - x^3"], 1, name="twisted_cubic")


def plane() -> VarietyModel:
    return VarietyModel.from_strings(["x", "y"], [], 2, name="plane")


def _fn(A, num, den="1"):
    return CAlgFunction(A, num, den)


def _snap(est) -> Optional[str]:
    return None if est.snapped is None else str(est.snapped)


# ---------------------------------------------------------------- random ideals


def random_ideals(seed: int = 0, count: int = 100):
    """Seeded small ideals: at most 3 variables, 3 generators, degree 3."""
    rng = random.Random(seed)
    names = ("x", "y", "z")
    out = []
    for _ in range(count):
        ring = names[: rng.randint(1, 3)]
        gens = []
        for _ in range(rng.randint(1, 3)):
            terms = {}
            for _ in range(rng.randint(1, 4)):
                deg = rng.randint(0, 3)
                e = [0] * len(ring)
                for _ in range(deg):
                    e[rng.randrange(len(ring))] += 1
                terms[tuple(e)] = Fraction(rng.randint(-5, 5), rng.choice((1, 1, 2, 3)))
            p = Poly(ring, terms)
            if p:
                gens.append(p)
        if not gens:
            gens.append(Poly.var(ring, ring[0]))
        out.append(Ideal(ring, gens))
    return out


def groebner_soundness(ideals, seed: int = 0) -> dict:
    """Representations, generator reduction, permutation invariance and the division identity."""
    rng = random.Random(seed)
    counts = {"ideals": 0, "representation": 0, "generators_reduce": 0, "permutation": 0, "division": 0}
    for I in ideals:
        counts["ideals"] += 1
        tb = I.groebner(GREVLEX, track=True)
        counts["representation"] += bool(tb.check_representation())
        counts["generators_reduce"] += all(normal_form(g, tb).is_zero() for g in I.generators)
        perm = list(I.generators)
        rng.shuffle(perm)
        counts["permutation"] += ideal_equal(I, Ideal(I.ring, perm))
        f = I.generators[0] * I.generators[-1] + Poly.var(I.ring, I.ring[0])
        qs, r = divide(f, list(I.generators))
        total = r
        for q, d in zip(qs, I.generators):
            total = total + q * d
        counts["division"] += total == f
    return counts


# ---------------------------------------------------------------- cases


def _cusp_denominator(seed):
    A = cusp()
    D = universal_denominator(A, seed=seed)
    R = represent(_fn(A, "y", "x"), D)
    return {"Q": print_canonical(D.Q), "d": D.d, "R_y_over_x": print_canonical(R)}


def _cusp_not_anormal(seed):
    A = cusp()
    ok, _ = member(A.poly("y"), Ideal(A.ring, [A.poly("x"), A.poly("y^2 - x^3")]))
    return {"y_in_x_plus_I": ok}


def _cusp_normalize(seed):
    A = cusp()
    N = graph_ideal(A, [_fn(A, "y", "x")])
    oracle = Ideal(N.ring, [Poly(N.ring, {(1, 0, 0): 1, (0, 0, 2): -1}), Poly(N.ring, {(0, 1, 0): 1, (0, 0, 3): -1})])
    return {"graph_ideal": [print_canonical(g) for g in N.graph_ideal.canonical_generators()],
            "equals_parametrization": ideal_equal(N.graph_ideal, oracle)}


def _cusp_nullsatz(seed):
    A = cusp()
    N = graph_ideal(A, [_fn(A, "y", "x")])
    g, fs = _fn(A, "y"), [_fn(A, "x")]
    C = certificate(g, fs, N)
    tampered = type(C)(C.n, [_fn(A, "y + 1", "x")], C.ambient_exponent, C.ambient_cofactors, C.graph_cofactors)
    try:
        certificate(_fn(A, "x + 1"), [_fn(A, "x"), _fn(A, "y")], N)
        negative = "certificate"
    except NoCertificate as exc:
        negative = exc.stage
    return {"n": C.n, "q": [q.to_dict() for q in C.q_list], "verified": verify_certificate(g, fs, C, A),
            "tampered_verified": verify_certificate(g, fs, tampered, A), "negative_control": negative}


def _cusp_unit(seed):
    A = cusp()
    N = graph_ideal(A, [_fn(A, "y", "x")])
    fs = [_fn(A, "x - 1"), _fn(A, "y")]
    C = unit_ideal_check(fs, N)
    return {"n": C.n, "q": [q.to_dict() for q in C.q_list],
            "verified": verify_certificate(_fn(A, "1"), fs, C, A)}


def _cusp_growth(seed):
    est = estimate_growth(_fn(cusp(), "y", "x"), cfg=GrowthConfig(seed=seed))
    return {"snapped": _snap(est), "within_tol": abs(est.slope - 1 / 3) <= 0.05}


def _plane_growth(seed):
    A = plane()
    est = estimate_growth(_fn(A, "x^2*y"), cfg=GrowthConfig(seed=seed))
    return {"snapped": _snap(est), "within_tol": abs(est.slope - 3) <= 0.05}


def _cusp_prop52(seed):
    A = cusp()
    N = graph_ideal(A, [_fn(A, "y", "x")])
    r = check_prop52(_fn(A, "y", "x"), N, GrowthConfig(seed=seed))
    p = r.payload
    snaps = [p["B_f"]["snapped"], p["B_fhat"]["snapped"]] + [b["snapped"] for b in p["B_h"]]
    return {"status": r.status, "snapped": [None if s is None else f"{s['p']}/{s['q']}" for s in snaps],
            "upper_holds": p["upper_holds"], "lower_holds": p["lower_holds"]}


def _node_denominator(seed):
    A = node()
    D = universal_denominator(A, seed=seed)
    R = represent(_fn(A, "y", "x"), D)
    return {"Q": print_canonical(D.Q), "d": D.d, "R_y_over_x": print_canonical(R)}


def _node_normalize(seed):
    A = node()
    N = graph_ideal(A, [_fn(A, "y", "x")])
    est = estimate_growth(_fn(A, "y", "x"), cfg=GrowthConfig(seed=seed))
    return {"graph_ideal": [print_canonical(g) for g in N.graph_ideal.canonical_generators()],
            "growth_y_over_x": _snap(est)}


def _cross_anormal(seed):
    A = cross()
    corpus = [_fn(A, "x^3 + 2*x + y^2 - 5"), _fn(A, "x*y + x - y"), _fn(A, "7")]
    report = verify_anormal_instance(A, corpus)
    N = graph_ideal(A, [])
    return {"status": report.status,
            "extensions": [e["extension"] for e in report.payload["functions"]],
            "identity_normalisation": N.is_identity() and ideal_equal(N.graph_ideal, A.ideal)}


def _cross_denominator(seed):
    A = cross()
    D = universal_denominator(A, seed=seed)
    return {"d": D.d, "Q_nonvanishing": not A.contains(D.Q)}


def _twisted_cubic(seed):
    A = twisted_cubic()
    D = universal_denominator(A, seed=seed)
    est = estimate_growth(_fn(A, "z"), cfg=GrowthConfig(seed=seed))
    return {"dimension": A.dimension(), "Q": print_canonical(D.Q), "d": D.d, "growth_z": _snap(est)}


def _groebner(seed):
    corpus = [cusp().ideal, node().ideal, cross().ideal, twisted_cubic().ideal]
    return groebner_soundness(corpus + random_ideals(seed, 100), seed)


CASES: List[CorpusCase] = [
    CorpusCase("cusp-denominator", "denominator", _cusp_denominator),
    CorpusCase("cusp-not-anormal", "membership", _cusp_not_anormal),
    CorpusCase("cusp-normalize", "normalize", _cusp_normalize),
    CorpusCase("cusp-nullsatz", "nullsatz", _cusp_nullsatz),
    CorpusCase("cusp-unit-ideal", "nullsatz", _cusp_unit),
    CorpusCase("cusp-growth", "growth", _cusp_growth),
    CorpusCase("plane-growth", "growth", _plane_growth),
    CorpusCase("cusp-prop52", "check", _cusp_prop52),
    CorpusCase("node-denominator", "denominator", _node_denominator),
    CorpusCase("node-normalize", "normalize", _node_normalize),
    CorpusCase("cross-anormal", "normalize", _cross_anormal),
    CorpusCase("cross-denominator", "denominator", _cross_denominator),
    CorpusCase("twisted-cubic", "denominator", _twisted_cubic),
    CorpusCase("groebner-soundness", "groebner", _groebner),
]


def load_golden(path=None) -> Dict[str, dict]:
    if path is None:
        text = resources.files("anorm").joinpath("data/golden.json").read_text(encoding="utf-8")
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read golden file {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"golden file is not valid json: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("golden file must map case names to expected observations")
    return data


def run_selftest(seed: int = 0, case_filter: Optional[str] = None, golden=None) -> List[Report]:
    """Run every case whose name or kind matches ``case_filter``; one report per case."""
    expected = load_golden(golden)
    reports = []
    for case in CASES:
        if case_filter and case_filter != case.kind and case_filter not in case.name:
            continue
        want = expected.get(case.name)
        try:
            got = case.run(seed)
        except AnormError as exc:
            reports.append(Report(case.name, case.kind, "fail", {"error": str(exc)}, [str(exc)]))
            continue
        if want is None:
            reports.append(Report(case.name, case.kind, "fail", {"observed": got}, ["no golden entry"]))
        elif got != want:
            diff = sorted(k for k in set(got) | set(want) if got.get(k) != want.get(k))
            reports.append(Report(case.name, case.kind, "fail", {"observed": got, "expected": want},
                                  [f"mismatch in {', '.join(diff)}"]))
        else:
            reports.append(Report(case.name, case.kind, "ok", {"observed": got}))
    return reports
