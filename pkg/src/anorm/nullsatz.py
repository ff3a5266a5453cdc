"""Nullstellensatz certificates ``g^n = sum q_i f_i`` for c-algebraic functions.

Pipeline: extend ``g`` and each ``f_i`` to polynomials ``G``, ``F_i`` on the
a-normalisation's ambient space, find ``G^n = sum w_i F_i + sum v_j P_j`` over
the graph ideal ``<P_j>`` by radical membership, then push each ``w_i`` down to
a rational function ``q_i`` on the base set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .anormalizer import ANormalisation, pullback_extend, pushdown
from .denominator import CAlgFunction
from .exceptions import InputError, VerificationError
from .expr_io import print_canonical
from .groebner import Ideal, radical_member
from .poly import Poly
from .variety import VarietyModel

__all__ = ["Certificate", "NoCertificate", "certificate", "verify_certificate", "unit_ideal_check"]


class NoCertificate(VerificationError):
    """No certificate: ``stage`` is ``radical_membership`` (hypothesis false) or ``extension``."""


@dataclass
class Certificate:
    n: int
    q_list: List[CAlgFunction]
    ambient_exponent: int
    ambient_cofactors: List[Poly]
    graph_cofactors: List[Poly]
    provenance: List[str] = field(default_factory=list)
    verified: bool = False

    def to_dict(self):
        return {
            "n": self.n,
            "q": [q.to_dict() for q in self.q_list],
            "ambient": {
                "exponent": self.ambient_exponent,
                "cofactors": [print_canonical(w) for w in self.ambient_cofactors],
                "graph_cofactors": [print_canonical(v) for v in self.graph_cofactors],
            },
            "generators": list(self.provenance),
            "verified": self.verified,
        }


def _one_of(A: VarietyModel) -> CAlgFunction:
    return CAlgFunction(A, 1, 1, name="1", validate=False)


def certificate(g: CAlgFunction, fs: Sequence[CAlgFunction], N: ANormalisation) -> Certificate:
    """Certificate for ``g`` vanishing on the common zeros of ``fs``; always verified on return."""
    A = N.base
    fs = list(fs)
    if not fs:
        raise InputError("certificate needs at least one member function")
    for h in [g] + fs:
        if not h.variety.same_set(A):
            raise InputError(f"{h.label()} is not a function on {A.name}")
    try:
        G = pullback_extend(g, N)
        Fs = [pullback_extend(f, N) for f in fs]
    except VerificationError as exc:
        raise NoCertificate(f"no certificate: extension failed ({exc})", stage="extension") from exc
    Ps = list(N.graph_ideal.generators)
    everything = Fs + Ps
    live = [i for i, p in enumerate(everything) if p]
    ok, n, cofs = radical_member(G, Ideal(N.ring, [everything[i] for i in live]))
    if not ok:
        raise NoCertificate("no certificate: radical membership failed", stage="radical_membership")
    full = [Poly.zero(N.ring) for _ in everything]
    for i, c in zip(live, cofs):
        full[i] = c
    ws, vs = full[: len(Fs)], full[len(Fs):]
    qs = [pushdown(w, N) for w in ws]
    for q in qs:
        if q.is_polynomial() and N.generators:
            q.module_coords = [q.num / q.den.constant_value()] + [Poly.zero(A.ring)] * len(N.generators)
            q.generators = list(N.generators)
    cert = Certificate(n, qs, n, ws, vs, [h.text() for h in N.generators])
    if not verify_certificate(g, fs, cert, A):
        raise VerificationError("certificate failed verification", stage="verify")
    cert.verified = True
    return cert


def verify_certificate(g: CAlgFunction, fs: Sequence[CAlgFunction], C: Certificate, A: VarietyModel) -> bool:
    """Exact check of ``g^n = sum q_i f_i`` on ``A`` after clearing all denominators."""
    fs = list(fs)
    if len(fs) != len(C.q_list) or C.n < 1:
        return False
    ring = A.ring
    sb = [f.den * q.den for f, q in zip(fs, C.q_list)]
    total = Poly.one(ring)
    for x in sb:
        total = total * x
    lhs = g.num ** C.n * total
    sgn = g.den ** C.n
    rhs = Poly.zero(ring)
    for i, (f, q) in enumerate(zip(fs, C.q_list)):
        others = Poly.one(ring)
        for j, x in enumerate(sb):
            if j != i:
                others = others * x
        rhs = rhs + q.num * f.num * others * sgn
    return A.contains(lhs - rhs)


def unit_ideal_check(fs: Sequence[CAlgFunction], N: ANormalisation) -> Certificate:
    """``1 = sum q_i f_i`` when the ``f_i`` have no common zero on the set."""
    return certificate(_one_of(N.base), fs, N)
