"""Buchberger's algorithm with cofactor tracking and the ideal operations built on it.

Every basis element remembers how it was obtained from the input generators,
so ideal membership comes with explicit witnesses ``f = sum c_j g_j``. All
witnesses are re-expanded and checked before they are returned.
"""

from __future__ import annotations

import contextlib
import contextvars
import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2
from gmpy2 import mpq

from .exceptions import ComputationLimit, InputError, RingMismatchError, VerificationError
from .poly import GREVLEX, MonomialOrder, Poly, content_normalize, fresh_name

__all__ = [
    "Limits",
    "limits",
    "current_limits",
    "Ideal",
    "TrackedBasis",
    "divide",
    "buchberger",
    "normal_form",
    "member",
    "eliminate",
    "saturate",
    "radical_member",
    "ideal_equal",
]


@dataclass(frozen=True)
class Limits:
    max_pairs: int = 50_000
    max_bits: int = 1_000_000


_LIMITS: contextvars.ContextVar[Limits] = contextvars.ContextVar("anorm_limits", default=Limits())


def current_limits() -> Limits:
    return _LIMITS.get()


@contextlib.contextmanager
def limits(max_pairs: Optional[int] = None, max_bits: Optional[int] = None):
    """Temporarily override the computation caps for the current context."""
    cur = _LIMITS.get()
    new = Limits(max_pairs if max_pairs is not None else cur.max_pairs,
                 max_bits if max_bits is not None else cur.max_bits)
    if new.max_pairs <= 0 or new.max_bits <= 0:
        raise InputError("computation caps must be positive")
    token = _LIMITS.set(new)
    try:
        yield new
    finally:
        _LIMITS.reset(token)


# ---------------------------------------------------------------- term helpers


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    return not any(x and y for x, y in zip(a, b))


def _sub_scaled(target, src, mono, c):
    """target -= c * mono * src, in place."""
    for e, v in src.items():
        e2 = tuple(x + y for x, y in zip(e, mono))
        nv = target.get(e2)
        nv = -c * v if nv is None else nv - c * v
        if nv:
            target[e2] = nv
        else:
            target.pop(e2, None)


def _mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e)
            out[e] = ca * cb if v is None else v + ca * cb
    return {e: c for e, c in out.items() if c}


def _add_into(target, src, scale=1):
    for e, v in src.items():
        nv = target.get(e)
        nv = v * scale if nv is None else nv + v * scale
        if nv:
            target[e] = nv
        else:
            target.pop(e, None)


def _bits(terms):
    bits = 0
    for c in terms.values():
        b = max(gmpy2.mpz(c.numerator).bit_length(), gmpy2.mpz(c.denominator).bit_length())
        if b > bits:
            bits = b
    return bits


def _reduce(h, basis, lms, key):
    """Reduce ``h`` (dict, consumed) by monic ``basis``.

    Returns (remainder, quotients) where quotients[k] is a term dict.
    """
    quots: List[Dict] = [dict() for _ in basis]
    rem = {}
    while h:
        m = max(h, key=key)
        c = h[m]
        for k, lm in enumerate(lms):
            if _divides(lm, m):
                mono = tuple(x - y for x, y in zip(m, lm))
                _sub_scaled(h, basis[k], mono, c)
                q = quots[k]
                q[mono] = q.get(mono, 0) + c
                break
        else:
            rem[m] = c
            del h[m]
    return rem, quots


# ---------------------------------------------------------------- tracked bases


class TrackedBasis:
    """A reduced Gröbner basis plus, optionally, each element's cofactors over the inputs."""

    def __init__(self, ring, order, inputs, basis, representation=None):
        self.ring = tuple(ring)
        self.order = order
        self.inputs: List[Poly] = list(inputs)
        self.basis: List[Poly] = list(basis)
        self.representation: Optional[List[List[Poly]]] = representation
        self._lms = [b.leading_monomial(order) for b in self.basis]
        self._terms = [b.terms for b in self.basis]

    @property
    def tracked(self):
        return self.representation is not None

    @property
    def leading_monomials(self):
        return list(self._lms)

    def is_unit(self):
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def reduce(self, f: Poly):
        if f.ring != self.ring:
            raise RingMismatchError(f"ring mismatch: {f.ring} vs {self.ring}")
        rem, quots = _reduce(dict(f.terms), self._terms, self._lms, self.order.key)
        return Poly._raw(self.ring, rem), [Poly._raw(self.ring, {e: mpq(c) for e, c in q.items() if c}) for q in quots]

    def check_representation(self):
        """Re-expand every tracked representation; raise on any mismatch."""
        if self.representation is None:
            return True
        for b, cofs in zip(self.basis, self.representation):
            total = Poly.zero(self.ring)
            for c, g in zip(cofs, self.inputs):
                if c:
                    total = total + c * g
            if total != b:
                raise VerificationError("tracked representation does not re-expand", stage="groebner")
        return True

    def __repr__(self):
        return f"TrackedBasis({[str(b) for b in self.basis]}, order={self.order!r})"


def _as_polys(ring, polys):
    out = []
    for p in polys:
        if not isinstance(p, Poly):
            raise InputError(f"expected Poly, got {type(p).__name__}")
        if p.ring != ring:
            raise RingMismatchError(f"ring mismatch: {p.ring} vs {ring}")
        out.append(p)
    return out


def _buchberger(ring, inputs, order, track=True, verify=True):
    lim = current_limits()
    key = order.key
    s = len(inputs)
    n = len(ring)
    G: List[Dict] = []
    LM: List[Tuple[int, ...]] = []
    COF: List[List[Dict]] = []
    SUG: List[int] = []
    pairs = {}

    def add(h, cof, sugar):
        idx = len(G)
        G.append(h)
        LM.append(max(h, key=key))
        COF.append(cof)
        SUG.append(sugar)
        for i in range(idx):
            l = _lcm(LM[i], LM[idx])
            sug = max(SUG[i] + sum(l) - sum(LM[i]), sugar + sum(l) - sum(LM[idx]))
            pairs[(i, idx)] = (sug, l)

    def make_monic(h, cof):
        lc = h[max(h, key=key)]
        if lc != 1:
            inv = 1 / lc
            h = {e: c * inv for e, c in h.items()}
            if cof is not None:
                cof = [{e: c * inv for e, c in v.items()} for v in cof]
        return h, cof

    unit = None
    for i, g in enumerate(inputs):
        h = dict(g.terms)
        cof = None
        if track:
            cof = [dict() for _ in range(s)]
            cof[i] = {(0,) * n: mpq(1)}
        h, cof = make_monic(h, cof)
        add(h, cof, sum(max(g.terms, key=lambda e: sum(e))))
        if not any(LM[-1]):
            unit = len(G) - 1
            break

    processed = 0
    while pairs and unit is None:
        (i, j), (sug, l) = min(pairs.items(), key=lambda kv: (kv[1][0], key(kv[1][1]), kv[0]))
        del pairs[(i, j)]
        processed += 1
        if processed > lim.max_pairs:
            raise ComputationLimit(f"Buchberger pair cap ({lim.max_pairs}) exceeded")
        if _coprime(LM[i], LM[j]):
            continue
        chain = False
        for k in range(len(G)):
            if k in (i, j) or not _divides(LM[k], l):
                continue
            if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                chain = True
                break
        if chain:
            continue
        mi = tuple(a - b for a, b in zip(l, LM[i]))
        mj = tuple(a - b for a, b in zip(l, LM[j]))
        h = {}
        _sub_scaled(h, G[i], mi, mpq(-1))
        _sub_scaled(h, G[j], mj, mpq(1))
        rem, quots = _reduce(h, G, LM, key)
        if not rem:
            continue
        if _bits(rem) > lim.max_bits:
            raise ComputationLimit(f"coefficient size cap ({lim.max_bits} bits) exceeded")
        cof = None
        if track:
            cof = [dict() for _ in range(s)]
            for t in range(s):
                _sub_scaled(cof[t], COF[i][t], mi, mpq(-1))
                _sub_scaled(cof[t], COF[j][t], mj, mpq(1))
            for k, q in enumerate(quots):
                if q:
                    for t in range(s):
                        if COF[k][t]:
                            _add_into(cof[t], _mul(q, COF[k][t]), -1)
        rem, cof = make_monic(rem, cof)
        add(rem, cof, sug)
        if not any(LM[-1]):
            unit = len(G) - 1

    if unit is not None:
        keep = [unit]
    else:
        keep = []
        for i in range(len(G)):
            dominated = False
            for j in range(len(G)):
                if j == i or not _divides(LM[j], LM[i]):
                    continue
                if LM[j] != LM[i] or j < i:
                    dominated = True
                    break
            if not dominated:
                keep.append(i)

    # inter-reduce the tails
    final = []
    for i in keep:
        others = [k for k in keep if k != i]
        h = dict(G[i])
        lm, lc = LM[i], G[i][LM[i]]
        del h[lm]
        rem, quots = _reduce(h, [G[k] for k in others], [LM[k] for k in others], key)
        rem[lm] = lc
        cof = None
        if track:
            cof = [dict(v) for v in COF[i]]
            for q, k in zip(quots, others):
                if q:
                    for t in range(s):
                        if COF[k][t]:
                            _add_into(cof[t], _mul(q, COF[k][t]), -1)
        final.append((rem, cof))
    # tails were reduced against the unreduced siblings; reduced basis is unique so this is final
    final.sort(key=lambda rc: key(max(rc[0], key=key)))
    basis = [Poly._raw(ring, {e: mpq(c) for e, c in rem.items()}) for rem, _ in final]
    rep = None
    if track:
        rep = [[Poly._raw(ring, {e: mpq(c) for e, c in v.items() if c}) for v in cof] for _, cof in final]
    tb = TrackedBasis(ring, order, inputs, basis, rep)
    if track and verify:
        tb.check_representation()
    return tb


class Ideal:
    """An ideal of ``Q[ring]`` given by generators, with a per-order basis cache."""

    def __init__(self, ring: Sequence[str], generators: Sequence[Poly] = ()):
        self.ring = tuple(ring)
        self.generators: Tuple[Poly, ...] = tuple(g for g in _as_polys(self.ring, generators) if g)
        self._cache: Dict[MonomialOrder, TrackedBasis] = {}
        self._lock = threading.Lock()

    def groebner(self, order: MonomialOrder = GREVLEX, track: bool = False) -> TrackedBasis:
        with self._lock:
            tb = self._cache.get(order)
        if tb is not None and (tb.tracked or not track):
            return tb
        tb = _buchberger(self.ring, list(self.generators), order, track=track)
        with self._lock:
            old = self._cache.get(order)
            if old is None or (tb.tracked and not old.tracked):
                self._cache[order] = tb
        return tb

    def is_zero(self):
        return not self.generators

    def is_unit(self):
        return self.groebner().is_unit()

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self.groebner()).is_zero()

    def __add__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatchError("ring mismatch")
        return Ideal(self.ring, self.generators + other.generators)

    def change_ring(self, ring):
        return Ideal(ring, [g.change_ring(ring) for g in self.generators])

    def canonical_generators(self, order: MonomialOrder = GREVLEX):
        """Reduced basis elements, content-normalized; the printable form of the ideal."""
        return [content_normalize(b, order) for b in self.groebner(order).basis]

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]}, ring={list(self.ring)})"


def _ideal(I, ring=None):
    if isinstance(I, Ideal):
        return I
    polys = list(I)
    if ring is None:
        if not polys:
            raise InputError("cannot infer the ring of an empty generator list")
        ring = polys[0].ring
    return Ideal(ring, polys)


# ---------------------------------------------------------------- operations


def divide(f: Poly, divisors: Sequence[Poly], order: MonomialOrder = GREVLEX):
    """Multivariate division: ``f = sum q_i d_i + r`` with no term of r divisible by any lt(d_i)."""
    divs = _as_polys(f.ring, divisors)
    key = order.key
    live = [(i, d) for i, d in enumerate(divs) if d]
    lts = [d.leading_term(order) for _, d in live]
    h = dict(f.terms)
    quots = [dict() for _ in divs]
    rem = {}
    while h:
        m = max(h, key=key)
        c = h[m]
        for (i, d), (lm, lc) in zip(live, lts):
            if _divides(lm, m):
                mono = tuple(x - y for x, y in zip(m, lm))
                q = c / lc
                _sub_scaled(h, d.terms, mono, q)
                quots[i][mono] = quots[i].get(mono, 0) + q
                break
        else:
            rem[m] = c
            del h[m]
    qs = [Poly._raw(f.ring, {e: mpq(c) for e, c in q.items() if c}) for q in quots]
    return qs, Poly._raw(f.ring, rem)


def buchberger(I, order: MonomialOrder = GREVLEX, track: bool = True) -> TrackedBasis:
    """Reduced Gröbner basis of ``I``; with ``track`` the cofactor identities are verified."""
    I = _ideal(I)
    return I.groebner(order, track=track)


def normal_form(f: Poly, B) -> Poly:
    if isinstance(B, Ideal):
        B = B.groebner()
    return B.reduce(f)[0]


def member(f: Poly, I) -> Tuple[bool, Optional[List[Poly]]]:
    """Decide ``f in I``; on success return cofactors over ``I.generators``."""
    I = _ideal(I, f.ring)
    if f.ring != I.ring:
        raise RingMismatchError(f"ring mismatch: {f.ring} vs {I.ring}")
    if f.is_zero():
        return True, [Poly.zero(I.ring) for _ in I.generators]
    if not I.generators:
        return False, None
    tb = I.groebner(GREVLEX, track=True)
    rem, quots = tb.reduce(f)
    if rem:
        return False, None
    cofs = [Poly.zero(I.ring) for _ in I.generators]
    for q, rep in zip(quots, tb.representation):
        if q:
            for j, r in enumerate(rep):
                if r:
                    cofs[j] = cofs[j] + q * r
    _check_combination(f, cofs, I.generators, "member")
    return True, cofs


def _check_combination(f, cofs, gens, stage):
    total = Poly.zero(f.ring)
    for c, g in zip(cofs, gens):
        if c:
            total = total + c * g
    if total != f:
        raise VerificationError("membership witness does not re-expand", stage=stage, residual=f - total)


def eliminate(I, keep: Sequence[str]) -> Ideal:
    """Generators of ``I ∩ Q[keep]``, returned over the sub-ring ``keep`` (in ring order)."""
    I = _ideal(I)
    unknown = [v for v in keep if v not in I.ring]
    if unknown:
        raise InputError(f"cannot keep unknown variables {unknown}")
    keep_idx = [i for i, v in enumerate(I.ring) if v in keep]
    elim_idx = [i for i, v in enumerate(I.ring) if v not in keep]
    sub = tuple(I.ring[i] for i in keep_idx)
    if not elim_idx:
        return Ideal(sub, [g.change_ring(sub) for g in I.generators])
    order = MonomialOrder.block(elim_idx, keep_idx)
    tb = I.groebner(order)
    gens = [b.change_ring(sub) for b, lm in zip(tb.basis, tb.leading_monomials) if not any(lm[i] for i in elim_idx)]
    return Ideal(sub, gens)


def saturate(I, s: Poly) -> Ideal:
    """``I : s^inf`` via an auxiliary variable ``u`` and elimination of ``I + <1 - u s>``."""
    I = _ideal(I, s.ring)
    if s.is_zero():
        raise InputError("cannot saturate by zero")
    if s.is_constant():
        return Ideal(I.ring, I.generators)
    u = fresh_name("u", I.ring)
    big = I.ring + (u,)
    gens = [g.change_ring(big) for g in I.generators]
    gens.append(Poly.one(big) - Poly.var(big, u) * s.change_ring(big))
    return eliminate(Ideal(big, gens), I.ring)


def radical_member(f: Poly, I) -> Tuple[bool, Optional[int], Optional[List[Poly]]]:
    """Decide ``f in rad(I)`` by the Rabinowitsch trick; return the smallest ``n`` found and
    cofactors with ``f^n = sum c_j g_j``.
    """
    I = _ideal(I, f.ring)
    ring = I.ring
    if f.ring != ring:
        raise RingMismatchError(f"ring mismatch: {f.ring} vs {ring}")
    if f.is_zero():
        return True, 1, [Poly.zero(ring) for _ in I.generators]
    if not I.generators:
        return False, None, None
    u = fresh_name("u", ring)
    big = ring + (u,)
    gens = [g.change_ring(big) for g in I.generators]
    fb = f.change_ring(big)
    gens.append(Poly.one(big) - Poly.var(big, u) * fb)
    tb = _buchberger(big, gens, GREVLEX, track=True)
    if not tb.is_unit():
        return False, None, None
    # 1 = sum c_j g_j + c (1 - u f); put u = 1/f and clear with f^N
    lc = tb.basis[0].constant_value()
    cofs = [c * (1 / lc) for c in tb.representation[0][:-1]]
    N = max([c.degree_in(u) for c in cofs if c] + [0])
    n = max(N, 1)
    fpows = [Poly.one(ring)]
    for _ in range(n):
        fpows.append(fpows[-1] * f)
    witness = []
    for c in cofs:
        acc = Poly.zero(ring)
        for k, part in c.coefficients_in(u).items():
            acc = acc + part.change_ring(ring) * fpows[n - k]
        witness.append(acc)
    _check_combination(fpows[n], witness, I.generators, "radical_member")
    for k in range(1, n):
        ok, cof = member(fpows[k], I)
        if ok:
            return True, k, cof
    return True, n, witness


def ideal_equal(I, J) -> bool:
    I, J = _ideal(I), _ideal(J)
    if I.ring != J.ring:
        raise RingMismatchError("ring mismatch")
    a = I.groebner(GREVLEX).basis
    b = J.groebner(GREVLEX).basis
    return len(a) == len(b) and all(x == y for x, y in zip(a, b))
