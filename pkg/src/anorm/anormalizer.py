"""Canonical a-normalisations as graph ideals of a generator list.

Given c-algebraic generators ``h_1..h_r`` on ``A`` (the constant 1 is implicit),
the graph ``{(z, w) : z in A, w_i = h_i(z)}`` is cut out by the saturation of
``I(A) + <s_i w_i - r_i>`` by the product of the denominators ``s_i``.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from .denominator import CAlgFunction
from .exceptions import InputError, VerificationError
from .expr_io import Report, print_canonical
from .groebner import Ideal, eliminate, ideal_equal, member, saturate
from .poly import Poly, fresh_name
from .variety import VarietyModel

__all__ = [
    "ANormalisation",
    "graph_ideal",
    "pullback_extend",
    "pushdown",
    "verify_anormal_instance",
    "transition_map",
    "extend_to_ambient",
]


class ANormalisation:
    """Graph of ``(h_1..h_r)`` over ``A`` in ``Q[z, w_1..w_r]`` with projection ``(z, w) -> z``."""

    def __init__(self, base: VarietyModel, generators: Sequence[CAlgFunction], wvars: Sequence[str],
                 ideal: Ideal, variety: VarietyModel):
        self.base = base
        self.generators = list(generators)
        self.wvars = tuple(wvars)
        self.graph_ideal = ideal
        self.variety = variety

    @property
    def ring(self):
        return self.graph_ideal.ring

    @property
    def zvars(self):
        return self.base.ring

    def is_identity(self):
        return not self.generators

    def lift(self, p: Poly) -> Poly:
        """A polynomial in the base variables, viewed on the ambient space of the graph."""
        return p.change_ring(self.ring)

    def to_dict(self):
        return {
            "variables": list(self.ring),
            "generators": [h.text() for h in self.generators],
            "graph_ideal": [print_canonical(g) for g in self.graph_ideal.canonical_generators()],
        }

    def __repr__(self):
        return f"ANormalisation({self.base.name}, gens={[h.text() for h in self.generators]})"


def graph_ideal(A: VarietyModel, gens: Sequence[CAlgFunction], names: Optional[Sequence[str]] = None,
                verify: bool = True) -> ANormalisation:
    """Build the canonical a-normalisation for the generator list ``gens``."""
    gens = list(gens)
    for h in gens:
        if not h.variety.same_set(A):
            raise InputError(f"generator {h.label()} is not defined on {A.name}")
        if A.contains(h.den):
            raise InputError(f"denominator of generator {h.label()} vanishes on {A.name}")
    if names is None:
        wvars = []
        taken = list(A.ring)
        for i in range(len(gens)):
            w = fresh_name(f"w{i + 1}" if len(gens) > 1 else "w", taken)
            wvars.append(w)
            taken.append(w)
    else:
        wvars = list(names)
        if len(wvars) != len(gens) or len(set(wvars) | set(A.ring)) != len(wvars) + len(A.ring):
            raise InputError("graph variable names must be fresh and one per generator")
    ring = A.ring + tuple(wvars)
    polys = [g.change_ring(ring) for g in A.ideal.generators]
    prod = Poly.one(ring)
    for h, w in zip(gens, wvars):
        s = h.den.change_ring(ring)
        polys.append(s * Poly.var(ring, w) - h.num.change_ring(ring))
        if not s.is_constant():
            prod = prod * s
    J = Ideal(ring, polys)
    if not prod.is_constant():
        J = saturate(J, prod)
    J = Ideal(ring, J.groebner().basis)
    dim = A.asserted_dim
    variety = VarietyModel(ring, J, dim, name=f"{A.name}^", validate=False)
    N = ANormalisation(A, gens, wvars, J, variety)
    if verify:
        _verify_graph(N)
    return N


def _verify_graph(N: ANormalisation):
    A = N.base
    proj = eliminate(N.graph_ideal, A.ring)
    if not ideal_equal(proj, A.ideal.change_ring(proj.ring) if A.ideal.ring != proj.ring else A.ideal):
        raise VerificationError("graph does not project onto the base set (elimination mismatch)", stage="graph")
    for h, w in zip(N.generators, N.wvars):
        rel = h.den.change_ring(N.ring) * Poly.var(N.ring, w) - h.num.change_ring(N.ring)
        if not N.graph_ideal.contains(rel):
            raise VerificationError(f"graph relation for {w} missing", stage="graph")
    N.variety.validate()


def extend_to_ambient(num: Poly, den: Poly, ideal: Ideal) -> Optional[Poly]:
    """Polynomial ``T`` with ``den * T ≡ num`` modulo ``ideal``, or None."""
    if den.is_constant():
        return num / den.constant_value()
    ok, cof = member(num, Ideal(ideal.ring, [den] + list(ideal.generators)))
    return cof[0] if ok else None


def pullback_extend(f: CAlgFunction, N: ANormalisation) -> Poly:
    """Polynomial on the graph's ambient space restricting to ``f ∘ π``."""
    if not f.variety.same_set(N.base):
        raise InputError(f"{f.label()} is not a function on {N.base.name}")
    r = N.lift(f.num)
    s = N.lift(f.den)
    if f.module_coords is not None and _same_generators(f.generators, N.generators):
        T = N.lift(f.module_coords[0])
        for p, w in zip(f.module_coords[1:], N.wvars):
            T = T + N.lift(p) * Poly.var(N.ring, w)
    else:
        T = extend_to_ambient(r, s, N.graph_ideal)
        if T is None:
            raise VerificationError(f"generator list does not witness an extension of {f.label()}",
                                    stage="extension")
    if not N.graph_ideal.contains(s * T - r):
        raise VerificationError(f"extension of {f.label()} does not verify", stage="extension")
    return N.variety.reduce(T)


def _same_generators(a, b):
    return a is not None and len(a) == len(b) and all(x is y or (x.num == y.num and x.den == y.den) for x, y in zip(a, b))


def pushdown(T: Poly, N: ANormalisation, simplify: bool = True) -> CAlgFunction:
    """Replace each ``w_i`` by ``h_i = r_i / s_i`` and clear denominators."""
    if T.ring != N.ring:
        T = T.change_ring(N.ring)
    z = N.base.ring
    degs = [T.degree_in(w) if T else 0 for w in N.wvars]
    degs = [d if isinstance(d, int) else 0 for d in degs]
    den = Poly.one(z)
    for h, D in zip(N.generators, degs):
        den = den * h.den ** D
    num = Poly.zero(z)
    cache = {}
    zi = len(z)
    for e, c in T.terms.items():
        term = Poly.monomial(z, e[:zi], c)
        for i, (h, D) in enumerate(zip(N.generators, degs)):
            b = e[zi + i]
            if D == 0:
                continue
            key = (i, b)
            factor = cache.get(key)
            if factor is None:
                factor = h.num ** b * h.den ** (D - b)
                cache[key] = factor
            term = term * factor
        num = num + term
    if not N.graph_ideal.contains(N.lift(den) * T - N.lift(num)):
        raise VerificationError("pushdown does not verify on the graph", stage="pushdown")
    out = CAlgFunction(N.base, num, den, validate=False)
    return out.simplified() if simplify else out


def verify_anormal_instance(N, corpus: Sequence[CAlgFunction], task_id: str = "anormal") -> Report:
    """Check that each corpus function on the set extends to a polynomial.

    ``N`` may be an :class:`ANormalisation` (its graph is tested) or a bare
    :class:`VarietyModel`. This only checks the given corpus.
    """
    variety = N.variety if isinstance(N, ANormalisation) else N
    entries = []
    ok_all = True
    for f in corpus:
        if f.variety.ring != variety.ring:
            raise InputError(f"{f.label()} is not a function on {variety.name}")
        T = extend_to_ambient(f.num, f.den, variety.ideal)
        if T is not None and variety.contains(f.den * T - f.num):
            entries.append({"function": f.label(), "status": "ok", "extension": print_canonical(variety.reduce(T))})
        else:
            ok_all = False
            entries.append({"function": f.label(), "status": "fail", "extension": None})
    return Report(task_id, "anormal", "ok" if ok_all else "fail", {"variety": variety.name, "functions": entries})


def transition_map(N1: ANormalisation, N2: ANormalisation) -> List[Poly]:
    """Polynomials on the ambient space of ``N1`` giving each coordinate of ``N2``.

    Base coordinates map identically; each graph coordinate of ``N2`` is the
    extension of its generator through ``N1``. Failure is reported, never guessed.
    """
    if N1.base.ring != N2.base.ring or not ideal_equal(N1.base.ideal, N2.base.ideal):
        raise InputError("a-normalisations live over different sets")
    coords = [Poly.var(N1.ring, v) for v in N1.base.ring]
    for h in N2.generators:
        try:
            coords.append(pullback_extend(h, N1))
        except VerificationError as exc:
            raise VerificationError(f"transition coordinate for {h.label()} does not extend: {exc}",
                                    stage="transition") from exc
    return coords
