"""Universal denominators and rational representations of c-algebraic functions.

For a pure ``k``-dimensional set with a Noether frame, the unitary polynomial
``P(x, t)`` describing the projection onto ``(x, t)`` gives the universal
denominator ``Q = dP/dt``: every c-algebraic ``f`` on the set can be written
``f = R / Q`` with ``R`` a polynomial. ``represent`` finds ``R`` exactly.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from .exceptions import InputError, VerificationError
from .expr_io import Report, parse_poly, print_canonical
from .groebner import Ideal, member
from .poly import Poly, fresh_name, partial_derivative
from .variety import NoetherFrame, VarietyModel

__all__ = [
    "CAlgFunction",
    "UniversalDenominator",
    "minimal_unitary_poly",
    "universal_denominator",
    "represent",
    "check_denominator",
]


def _as_poly(value, ring):
    if isinstance(value, Poly):
        return value if value.ring == ring else value.change_ring(ring)
    if isinstance(value, str):
        return parse_poly(value, ring)
    return Poly.const(ring, value)


class CAlgFunction:
    """A function on a variety presented as ``num / den``.

    Continuity (c-holomorphy) is a user assertion; what is checked is that the
    denominator does not vanish identically on the variety. ``module_coords``,
    when given, are coefficients ``p_0, p_1, ..., p_r`` with
    ``f = p_0 + sum p_i h_i`` over ``generators`` ``h_1..h_r``.
    """

    def __init__(self, variety: VarietyModel, num, den=1, name: Optional[str] = None,
                 continuity_asserted: bool = True, module_coords=None, generators=None,
                 validate: bool = True):
        self.variety = variety
        self.num = _as_poly(num, variety.ring)
        self.den = _as_poly(den, variety.ring)
        self.name = name
        self.continuity_asserted = continuity_asserted
        if self.den.is_zero():
            raise InputError("denominator is the zero polynomial")
        self.module_coords = None
        self.generators = None
        if module_coords is not None:
            if generators is None or len(module_coords) != len(generators) + 1:
                raise InputError("module_coords needs one entry per generator plus the constant term")
            self.module_coords = [_as_poly(p, variety.ring) for p in module_coords]
            self.generators = list(generators)
        if validate:
            self.validate()

    @classmethod
    def polynomial(cls, variety, p, name=None):
        return cls(variety, p, 1, name=name)

    @property
    def ring(self):
        return self.variety.ring

    def is_polynomial(self):
        return self.den.is_constant()

    def validate(self):
        if self.variety.contains(self.den):
            raise InputError(f"denominator of {self.label()} vanishes identically on {self.variety.name}")
        if self.module_coords is not None and not self.check_module_coords():
            raise VerificationError(f"module coordinates of {self.label()} do not reproduce it",
                                    stage="module_coords")
        return self

    def check_module_coords(self) -> bool:
        """Exact check of ``num/den = p_0 + sum p_i h_i`` on the variety, cross-multiplied."""
        gens = self.generators
        dens = [h.den for h in gens]
        prod = Poly.one(self.ring)
        for s in dens:
            prod = prod * s
        rhs = self.module_coords[0] * prod
        for i, (p, h) in enumerate(zip(self.module_coords[1:], gens)):
            others = Poly.one(self.ring)
            for j, s in enumerate(dens):
                if j != i:
                    others = others * s
            rhs = rhs + p * h.num * others
        return self.variety.contains(self.num * prod - self.den * rhs)

    def label(self):
        return self.name or self.text()

    def text(self):
        if self.den == 1:
            return print_canonical(self.num)
        return f"({print_canonical(self.num)})/({print_canonical(self.den)})"

    def evaluate_complex(self, point, rel_tol: float = 1e-9) -> Optional[complex]:
        """Numeric value at ``point``; None where the denominator is numerically zero."""
        d = self.den.evaluate_complex(point)
        if abs(d) <= rel_tol * max(self.den.absolute_scale(point), 1e-300):
            return None
        return self.num.evaluate_complex(point) / d

    def equivalent(self, other: "CAlgFunction") -> bool:
        """Exact equality as functions on the variety (cross-multiplied)."""
        return self.variety.contains(self.num * other.den - other.num * self.den)

    def simplified(self) -> "CAlgFunction":
        """Return a polynomial presentation when one exists, else a copy with reduced numerator."""
        if self.den.is_constant():
            return CAlgFunction(self.variety, self.variety.reduce(self.num / self.den.constant_value()), 1,
                                name=self.name, validate=False)
        ok, cof = member(self.num, Ideal(self.ring, [self.den] + list(self.variety.ideal.generators)))
        if ok:
            return CAlgFunction(self.variety, self.variety.reduce(cof[0]), 1, name=self.name, validate=False)
        return self

    def to_dict(self):
        return {"num": print_canonical(self.num), "den": print_canonical(self.den)}

    def __repr__(self):
        return f"CAlgFunction({self.text()!r} on {self.variety.name})"


class UniversalDenominator:
    """``Q = dP/dt`` pulled back to original coordinates, with its frame and ``P``."""

    def __init__(self, variety, frame: Optional[NoetherFrame], P: Poly, Q_frame: Poly, Q: Poly):
        self.variety = variety
        self.frame = frame
        self.P = P
        self.Q_frame = Q_frame
        self.Q = Q

    @property
    def d(self):
        return self.frame.d if self.frame is not None else 1

    def to_dict(self):
        fr = self.frame
        return {
            "Q": print_canonical(self.Q),
            "P": print_canonical(self.P),
            "d": self.d,
            "frame": fr.matrix_text() if fr is not None else None,
            "t": fr.t_var if fr is not None else None,
        }

    def __repr__(self):
        return f"UniversalDenominator(Q={print_canonical(self.Q)!r}, P={print_canonical(self.P)!r})"


def minimal_unitary_poly(A: VarietyModel, frame: Optional[NoetherFrame] = None, seed: int = 0) -> Poly:
    """Monic generator in ``t`` of the elimination ideal onto ``(base, t)``, frame coordinates.

    For the full space the convention ``P = t`` over an extra variable is used.
    """
    frame = frame if frame is not None else A.frame(seed)
    if frame.t_var is None:
        t = fresh_name("t", A.ring)
        return Poly.var(A.ring + (t,), t)
    P = frame.unitary
    if P is None or P.degree_in(frame.t_var) != frame.d:
        raise VerificationError("frame has no unitary polynomial of degree d", stage="frame")
    return P


def universal_denominator(A: VarietyModel, seed: int = 0, frame: Optional[NoetherFrame] = None) -> UniversalDenominator:
    if A.asserted_dim == A.m:
        P = minimal_unitary_poly(A, frame or A.frame(seed))
        one = Poly.one(A.ring)
        return UniversalDenominator(A, frame or A.frame(seed), P, one, one)
    frame = frame if frame is not None else A.frame(seed)
    P = minimal_unitary_poly(A, frame)
    Q_frame = partial_derivative(P, frame.t_var)
    Q = frame.to_original(Q_frame)
    if A.contains(Q):
        raise VerificationError("derivative of the unitary polynomial vanishes on the set", stage="denominator")
    return UniversalDenominator(A, frame, P, Q_frame, Q)


def represent(f: CAlgFunction, D) -> Poly:
    """``R`` with ``R * den ≡ num * Q`` modulo ``I(A)``, so that ``f = R / Q`` on ``A``."""
    A = f.variety
    Q = D.Q if isinstance(D, UniversalDenominator) else D
    if Q.ring != A.ring:
        raise InputError("denominator and function live on different rings")
    target = f.num * Q
    if f.den.is_constant():
        R = target / f.den.constant_value()
    else:
        ok, cof = member(target, Ideal(A.ring, [f.den] + list(A.ideal.generators)))
        if not ok:
            raise VerificationError(f"{f.label()} is not representable over Q = {print_canonical(Q)}",
                                    stage="represent")
        R = cof[0]
    if not A.contains(R * f.den - target):
        raise VerificationError("representation does not verify", stage="represent")
    return R


def check_denominator(D: UniversalDenominator, testfns: Sequence[CAlgFunction], task_id: str = "denominator") -> Report:
    A = D.variety
    nonvanishing = not A.contains(D.Q)
    entries = []
    all_ok = nonvanishing
    for f in testfns:
        try:
            R = represent(f, D)
            entries.append({"function": f.label(), "status": "ok", "R": print_canonical(R)})
        except VerificationError as exc:
            all_ok = False
            entries.append({"function": f.label(), "status": "fail", "R": None, "reason": str(exc)})
    payload = D.to_dict()
    payload["nonvanishing"] = nonvanishing
    payload["functions"] = entries
    return Report(task_id, "denominator", "ok" if all_ok else "fail", payload)
