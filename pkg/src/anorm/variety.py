"""Affine algebraic sets with asserted pure dimension, and Noether frames for them.

A Noether frame is a linear change of coordinates ``z = L z'`` after which the
projection onto the first ``k`` coordinates is proper on the set. Properness is
certified symbolically by monic witnesses; the primitive coordinate's witness
is the unitary polynomial whose ``t``-degree is the covering number.
"""

from __future__ import annotations

import itertools
import random
import threading
import warnings
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from gmpy2 import mpq

from .exceptions import AnormError, ComputationLimit, InputError, NumericError
from .expr_io import parse_poly
from .groebner import Ideal, eliminate, ideal_equal, normal_form
from .numeric import FiberCountWarning, fiber_solve
from .poly import GREVLEX, Poly, invert_matrix, linear_change, to_rational

__all__ = [
    "VarietyModel",
    "NoetherFrame",
    "dimension",
    "properness_check",
    "noether_frame",
    "covering_number",
]

MAX_FRAME_ATTEMPTS = 64


def dimension(I) -> int:
    """Krull dimension of ``Q[ring]/I`` from the leading-term ideal.

    The dimension is the size of the largest variable subset containing the
    support of no leading monomial.
    """
    if not isinstance(I, Ideal):
        raise InputError("dimension expects an Ideal")
    m = len(I.ring)
    if I.is_zero():
        return m
    tb = I.groebner(GREVLEX)
    if tb.is_unit():
        raise InputError("the unit ideal has no dimension (empty set)")
    supports = [frozenset(i for i, x in enumerate(lm) if x) for lm in tb.leading_monomials]
    for size in range(m, -1, -1):
        for subset in itertools.combinations(range(m), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


class NoetherFrame:
    """Coordinate change plus properness witnesses; immutable once built."""

    def __init__(self, ring, L, k, witnesses: Dict[str, Poly], d: int, transformed_generators):
        self.ring = tuple(ring)
        self.L = [[to_rational(x) for x in row] for row in L]
        self.Linv = invert_matrix(self.L)
        self.k = k
        self.witnesses = dict(witnesses)
        self.d = d
        self.transformed_generators = list(transformed_generators)

    @property
    def m(self):
        return len(self.ring)

    @property
    def t_index(self) -> Optional[int]:
        return self.k if self.k < self.m else None

    @property
    def t_var(self) -> Optional[str]:
        return self.ring[self.k] if self.k < self.m else None

    @property
    def base_vars(self):
        return self.ring[: self.k]

    @property
    def unitary(self) -> Optional[Poly]:
        """The unitary polynomial in ``(base, t)``, or None for the full space."""
        return self.witnesses.get(self.t_var) if self.t_var is not None else None

    def is_identity(self):
        return all(self.L[i][j] == (1 if i == j else 0) for i in range(self.m) for j in range(self.m))

    def witness_for(self, var) -> Poly:
        return self.witnesses[var]

    def to_frame(self, p: Poly) -> Poly:
        """Express a polynomial in original coordinates in frame coordinates."""
        return linear_change(p, self.L)

    def to_original(self, obj):
        """Map a frame-coordinate polynomial or point back to original coordinates."""
        if isinstance(obj, Poly):
            return linear_change(obj, self.Linv)
        pt = list(obj)
        return tuple(sum(complex(float(self.L[i][j])) * pt[j] for j in range(self.m)) for i in range(self.m))

    def matrix_text(self):
        return [[str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}" for x in row]
                for row in self.L]

    def __repr__(self):
        return f"NoetherFrame(k={self.k}, d={self.d}, t={self.t_var}, L={self.matrix_text()})"


class VarietyModel:
    """An affine algebraic set ``A = V(I)`` in ``Q^m`` with asserted pure dimension.

    The generators are taken to generate the vanishing ideal of ``A`` (radical);
    every exact check modulo ``I(A)`` relies on that. Mixed-dimensional input is
    not detected: only the dimension value is verified.
    """

    def __init__(self, ring: Sequence[str], generators, dim: int, name: str = "A", validate: bool = True):
        self.name = name
        self.ring = tuple(ring)
        if len(set(self.ring)) != len(self.ring):
            raise InputError(f"duplicate variables in {list(self.ring)}")
        if isinstance(generators, Ideal):
            self.ideal = generators if generators.ring == self.ring else generators.change_ring(self.ring)
        else:
            self.ideal = Ideal(self.ring, list(generators))
        if not isinstance(dim, int) or not 0 <= dim <= len(self.ring):
            raise InputError(f"dimension must be an integer in [0, {len(self.ring)}]")
        self.asserted_dim = dim
        self._dimension = None
        self._frames: Dict[int, NoetherFrame] = {}
        self._lock = threading.Lock()
        if validate:
            self.validate()

    @classmethod
    def from_strings(cls, variables, polys, dim, name="A", validate=True):
        ring = tuple(variables)
        gens = [parse_poly(p, ring) for p in polys]
        return cls(ring, gens, dim, name=name, validate=validate)

    @property
    def m(self):
        return len(self.ring)

    @property
    def k(self):
        return self.asserted_dim

    def dimension(self) -> int:
        if self._dimension is None:
            self._dimension = dimension(self.ideal)
        return self._dimension

    def validate(self):
        got = self.dimension()
        if got != self.asserted_dim:
            raise InputError(f"variety {self.name}: asserted dimension {self.asserted_dim}, computed {got}")
        return self

    def contains(self, f: Poly) -> bool:
        """True when ``f`` lies in ``I(A)``, i.e. vanishes identically on ``A``."""
        if self.ideal.is_zero():
            return f.is_zero()
        return normal_form(f, self.ideal.groebner()).is_zero()

    def reduce(self, f: Poly) -> Poly:
        if self.ideal.is_zero():
            return f
        return normal_form(f, self.ideal.groebner())

    def frame(self, seed: int = 0, tol: float = 1e-6) -> NoetherFrame:
        with self._lock:
            fr = self._frames.get(seed)
        if fr is None:
            fr = noether_frame(self, seed, tol=tol)
            with self._lock:
                self._frames.setdefault(seed, fr)
        return fr

    def same_set(self, other: "VarietyModel") -> bool:
        """Same ambient ring and the same ideal."""
        if other is self:
            return True
        return other.ring == self.ring and ideal_equal(other.ideal, self.ideal)

    def poly(self, text: str) -> Poly:
        return parse_poly(text, self.ring)

    def __repr__(self):
        return f"VarietyModel({self.name!r}, ring={list(self.ring)}, ideal={[str(g) for g in self.ideal.generators]}, dim={self.asserted_dim})"


def _monic_in(p: Poly, var) -> Optional[Poly]:
    """Scale ``p`` to be monic in ``var`` if its top ``var``-coefficient is a nonzero constant."""
    deg = p.degree_in(var)
    if not isinstance(deg, int) or deg < 1:
        return None
    top = p.coefficients_in(var)[deg]
    if not top.is_constant() or top.is_zero():
        return None
    return p * (1 / top.constant_value())


def properness_check(I: Ideal, L=None, k: Optional[int] = None, base: Optional[Sequence[str]] = None):
    """Certify that projecting ``V(I)∘L`` onto its first ``k`` coordinates is proper.

    ``base`` may name the base variables directly; the ring is then reordered
    to put them first and no coordinate change is applied. Returns ``{var: monic witness}`` for every
    non-base variable, or ``None`` when some variable has no monic witness.
    """
    if base is not None:
        unknown = [v for v in base if v not in I.ring]
        if unknown:
            raise InputError(f"unknown base variables {unknown}")
        reordered = tuple(base) + tuple(v for v in I.ring if v not in base)
        I = I.change_ring(reordered)
        L, k = None, len(base)
    ring = I.ring
    m = len(ring)
    if L is None:
        L = [[int(i == j) for j in range(m)] for i in range(m)]
    if k is None:
        raise InputError("properness_check needs k or base")
    J = Ideal(ring, [linear_change(g, L) for g in I.generators])
    base_vars = ring[:k]
    witnesses = {}
    for v in ring[k:]:
        E = eliminate(J, base_vars + (v,))
        best = None
        for g in E.groebner(GREVLEX).basis:
            w = _monic_in(g, v)
            if w is not None and (best is None or w.degree_in(v) < best.degree_in(v)):
                best = w
        if best is None:
            return None
        witnesses[v] = best.change_ring(ring)
    return witnesses


def _unitary_generator(J: Ideal, k: int):
    """Principal generator of the elimination ideal onto (base, t), made monic in t."""
    ring = J.ring
    t = ring[k]
    E = eliminate(J, ring[: k + 1])
    basis = E.groebner(GREVLEX).basis
    if len(basis) != 1:
        return None
    P = _monic_in(basis[0], t)
    return P.change_ring(ring) if P is not None else None


def _random_unimodular(rng: random.Random, m: int):
    while True:
        L = [[rng.randint(-3, 3) for _ in range(m)] for _ in range(m)]
        det = _det(L)
        if det in (1, -1):
            return L


def _det(L):
    a = [[Fraction(x) for x in row] for row in L]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def _random_base_point(rng: random.Random, k: int):
    return [mpq(rng.randint(-997, 997), rng.randint(7, 97)) for _ in range(k)]


def _numeric_fiber_count_ok(frame, A, rng, tol, tries=3):
    """True when some generic base point has exactly ``d`` fiber points and none has more."""
    hit = False
    for _ in range(tries):
        x0 = _random_base_point(rng, frame.k)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", FiberCountWarning)
                pts = fiber_solve(frame, A, x0, tol=tol)
        except NumericError:
            continue
        if len(pts) > frame.d:
            return False
        if len(pts) == frame.d:
            hit = True
    return hit


def build_frame(A: VarietyModel, L, rng=None, tol: float = 1e-6, check: bool = True) -> Optional[NoetherFrame]:
    """Try one coordinate change; return the frame if properness and primitivity hold."""
    ring = A.ring
    k = A.asserted_dim
    m = len(ring)
    J = Ideal(ring, [linear_change(g, L) for g in A.ideal.generators])
    if k == m:
        return NoetherFrame(ring, L, k, {}, 1, J.generators)
    witnesses = properness_check(A.ideal, L, k)
    if witnesses is None:
        return None
    P = _unitary_generator(J, k)
    if P is None:
        return None
    witnesses[ring[k]] = P
    d = P.degree_in(ring[k])
    frame = NoetherFrame(ring, L, k, witnesses, d, J.generators)
    if check and not _numeric_fiber_count_ok(frame, A, rng or random.Random(0), tol):
        return None
    return frame


def noether_frame(A: VarietyModel, seed: int = 0, tol: float = 1e-6, max_attempts: int = MAX_FRAME_ATTEMPTS) -> NoetherFrame:
    """Identity first, then seeded unimodular changes with entries in [-3, 3]."""
    m = len(A.ring)
    rng = random.Random(seed)
    check_rng = random.Random(seed + 0x5EED)
    identity = [[int(i == j) for j in range(m)] for i in range(m)]
    fr = build_frame(A, identity, check_rng, tol)
    if fr is not None:
        return fr
    for _ in range(max_attempts):
        L = _random_unimodular(rng, m)
        fr = build_frame(A, L, check_rng, tol)
        if fr is not None:
            return fr
    raise ComputationLimit(f"no Noether frame found for {A.name} within {max_attempts} attempts")


def covering_number(frame: NoetherFrame, P: Optional[Poly] = None, A: Optional[VarietyModel] = None,
                    seed: int = 0, tol: float = 1e-6) -> int:
    """``deg_t P``, cross-checked against the numeric fiber count when ``A`` is given."""
    if frame.t_var is None:
        return 1
    P = P if P is not None else frame.unitary
    d = P.degree_in(frame.t_var)
    if A is not None:
        probe = NoetherFrame(frame.ring, frame.L, frame.k, {**frame.witnesses, frame.t_var: P}, d,
                             frame.transformed_generators)
        if not _numeric_fiber_count_ok(probe, A, random.Random(seed), tol):
            raise AnormError(f"covering number {d} not confirmed numerically (primitivity failure)")
    return d
