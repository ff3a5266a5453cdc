"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Poly` is an immutable map from exponent tuples to nonzero
``gmpy2.mpq`` coefficients over a fixed, named variable list (its *ring*).
Monomial orders are plain sort keys on exponent tuples.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import gmpy2
from gmpy2 import mpq

from .exceptions import InputError, RingMismatchError

Monomial = Tuple[int, ...]

__all__ = [
    "Poly",
    "MonomialOrder",
    "LEX",
    "GRLEX",
    "GREVLEX",
    "DEGREE_OF_ZERO",
    "to_rational",
    "poly_add",
    "poly_mul",
    "partial_derivative",
    "substitute",
    "linear_change",
    "content_normalize",
    "invert_matrix",
]


class _ZeroDegree:
    """Degree of the zero polynomial: below every integer, no arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "DEGREE_OF_ZERO"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("DEGREE_OF_ZERO")


DEGREE_OF_ZERO = _ZeroDegree()


def to_rational(value) -> mpq:
    if isinstance(value, bool):
        raise InputError("booleans are not coefficients")
    if isinstance(value, (int, _RationalABC)) or type(value).__name__ in ("mpz", "mpq"):
        if isinstance(value, Fraction):
            return mpq(value.numerator, value.denominator)
        return mpq(value)
    if isinstance(value, str):
        return mpq(Fraction(value).numerator, Fraction(value).denominator)
    raise InputError(f"not an exact rational: {value!r}")


# ---------------------------------------------------------------- orders


def _grevlex_key(idx):
    rev = tuple(reversed(idx))

    def key(e):
        return (sum(e[i] for i in idx), tuple(-e[i] for i in rev))

    return key


class MonomialOrder:
    """A term order given by a sort key on exponent tuples (larger key = larger monomial).

    ``kind`` is one of ``lex``, ``grlex``, ``grevlex`` or ``block``. Orders
    are defined on variable *positions*; ``priority`` permutes which position
    counts as the most significant for ``lex``/``grlex``/``grevlex``.
    """

    __slots__ = ("kind", "priority", "blocks", "inner", "key", "_id")

    def __init__(self, kind="grevlex", priority=None, blocks=None, inner="grevlex"):
        self.kind = kind
        self.priority = tuple(priority) if priority is not None else None
        self.blocks = tuple(tuple(b) for b in blocks) if blocks is not None else None
        self.inner = inner
        if kind == "block":
            if not self.blocks:
                raise InputError("block order needs blocks")
            keys = [_simple_key(inner, b) for b in self.blocks]
            self.key = lambda e: tuple(k(e) for k in keys)
        else:
            self.key = _simple_key(kind, self.priority)
        self._id = (kind, self.priority, self.blocks, inner if kind == "block" else None)

    @classmethod
    def block(cls, first: Sequence[int], rest: Sequence[int], inner="grevlex"):
        """Elimination order: any monomial involving ``first`` beats all in ``rest`` alone."""
        return cls("block", blocks=(tuple(first), tuple(rest)), inner=inner)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self._id == other._id

    def __hash__(self):
        return hash(self._id)

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder.block({list(self.blocks[0])}, {list(self.blocks[1])}, inner={self.inner!r})"
        if self.priority is not None:
            return f"MonomialOrder({self.kind!r}, priority={list(self.priority)})"
        return f"MonomialOrder({self.kind!r})"


def _simple_key(kind, idx):
    if kind == "lex":
        if idx is None:
            return lambda e: e
        return lambda e: tuple(e[i] for i in idx)
    if kind == "grlex":
        if idx is None:
            return lambda e: (sum(e), e)
        return lambda e: (sum(e[i] for i in idx), tuple(e[i] for i in idx))
    if kind == "grevlex":
        if idx is None:
            return lambda e: (sum(e), tuple(-x for x in reversed(e)))
        return _grevlex_key(tuple(idx))
    raise InputError(f"unknown monomial order {kind!r}")


LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")
GREVLEX = MonomialOrder("grevlex")


# ---------------------------------------------------------------- polynomials


class Poly:
    __slots__ = ("ring", "terms", "_hash", "_float_terms")

    def __init__(self, ring: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        ring = tuple(ring)
        clean: Dict[Monomial, mpq] = {}
        n = len(ring)
        for exps, c in (terms or {}).items():
            exps = tuple(int(x) for x in exps)
            if len(exps) != n or any(x < 0 for x in exps):
                raise InputError(f"bad exponent vector {exps} for ring {ring}")
            c = to_rational(c)
            if c:
                clean[exps] = clean.get(exps, mpq(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.ring = ring
        self.terms = clean
        self._hash = None
        self._float_terms = None

    @classmethod
    def _raw(cls, ring, terms):
        # trusted constructor: terms already clean, ring already a tuple
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        p._float_terms = None
        return p

    # constructors
    @classmethod
    def zero(cls, ring):
        return cls._raw(tuple(ring), {})

    @classmethod
    def const(cls, ring, c):
        ring = tuple(ring)
        c = to_rational(c)
        return cls._raw(ring, {(0,) * len(ring): c} if c else {})

    @classmethod
    def one(cls, ring):
        return cls.const(ring, 1)

    @classmethod
    def var(cls, ring, name):
        ring = tuple(ring)
        i = _index(ring, name)
        e = [0] * len(ring)
        e[i] = 1
        return cls._raw(ring, {tuple(e): mpq(1)})

    @classmethod
    def monomial(cls, ring, exps, c=1):
        return cls(ring, {tuple(exps): c})

    # basic queries
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> mpq:
        return self.terms.get((0,) * len(self.ring), mpq(0))

    def degree(self):
        if not self.terms:
            return DEGREE_OF_ZERO
        return max(sum(e) for e in self.terms)

    def degree_in(self, var):
        if not self.terms:
            return DEGREE_OF_ZERO
        i = _index(self.ring, var)
        return max(e[i] for e in self.terms)

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return tuple(self.ring[i] for i in sorted(used))

    def leading_term(self, order: MonomialOrder = GREVLEX):
        if not self.terms:
            raise InputError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def leading_monomial(self, order: MonomialOrder = GREVLEX):
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder = GREVLEX):
        return self.leading_term(order)[1]

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda kv: order.key(kv[0]), reverse=True)

    def coefficients_in(self, var) -> Dict[int, "Poly"]:
        """Split into ``{k: coefficient of var^k}``; coefficients stay in the same ring."""
        i = _index(self.ring, var)
        out: Dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            out.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: Poly._raw(self.ring, t) for k, t in out.items()}

    # equality / hashing
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            c = to_rational(other)
        except InputError:
            return NotImplemented
        return self.is_constant() and self.constant_value() == c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        from .expr_io import print_canonical

        return f"Poly({print_canonical(self)!r}, ring={list(self.ring)})"

    def __str__(self):
        from .expr_io import print_canonical

        return print_canonical(self)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        try:
            return Poly.const(self.ring, other)
        except InputError:
            return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Poly._raw(self.ring, _add_terms(self.terms, other.terms, mpq(1)))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Poly._raw(self.ring, _add_terms(self.terms, other.terms, mpq(-1)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            other = self._coerce(other)
            return Poly._raw(self.ring, _mul_terms(self.terms, other.terms))
        try:
            c = to_rational(other)
        except InputError:
            return NotImplemented
        if not c:
            return Poly.zero(self.ring)
        return Poly._raw(self.ring, {e: v * c for e, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        # only division by a nonzero rational scalar
        c = to_rational(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * (1 / c)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise InputError("exponent must be a non-negative integer")
        result = Poly.one(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # structural helpers
    def change_ring(self, ring: Sequence[str]) -> "Poly":
        """Re-express over ``ring`` by variable name; used variables must be present."""
        ring = tuple(ring)
        if ring == self.ring:
            return self
        pos = []
        for i, name in enumerate(self.ring):
            pos.append(ring.index(name) if name in ring else None)
        n = len(ring)
        out = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, x in enumerate(e):
                if x:
                    if pos[i] is None:
                        raise RingMismatchError(f"variable {self.ring[i]!r} not in {ring}")
                    new[pos[i]] = x
            out[tuple(new)] = c
        return Poly._raw(ring, out)

    def derivative(self, var) -> "Poly":
        return partial_derivative(self, var)

    def subs(self, assignments: Mapping[str, "Poly"], target_ring=None) -> "Poly":
        return substitute(self, assignments, target_ring)

    def evaluate(self, point: Mapping[str, object] | Sequence[object]) -> mpq:
        """Exact evaluation at a rational point."""
        vals = _point_values(self.ring, point)
        vals = [to_rational(v) for v in vals]
        total = mpq(0)
        for e, c in self.terms.items():
            t = c
            for v, x in zip(vals, e):
                if x:
                    t *= v ** x
            total += t
        return total

    def float_terms(self):
        if self._float_terms is None:
            self._float_terms = [(e, float(c)) for e, c in self.terms.items()]
        return self._float_terms

    def evaluate_complex(self, point: Sequence[complex]) -> complex:
        total = 0j
        for e, c in self.float_terms():
            t = complex(c)
            for v, x in zip(point, e):
                if x:
                    t *= v ** x
            total += t
        return total

    def absolute_scale(self, point: Sequence[complex]) -> float:
        """Sum of absolute term values at ``point``; the natural scale for residuals."""
        total = 0.0
        for e, c in self.float_terms():
            t = abs(c)
            for v, x in zip(point, e):
                if x:
                    t *= abs(v) ** x
            total += t
        return total

    def max_coefficient_bits(self):
        bits = 0
        for c in self.terms.values():
            bits = max(bits, gmpy2.mpz(c.numerator).bit_length(), gmpy2.mpz(c.denominator).bit_length())
        return bits


def _index(ring, name):
    if isinstance(name, int):
        if not 0 <= name < len(ring):
            raise InputError(f"variable index {name} out of range")
        return name
    try:
        return ring.index(name)
    except ValueError:
        raise InputError(f"unknown variable {name!r} (ring {list(ring)})") from None


def _point_values(ring, point):
    if isinstance(point, Mapping):
        missing = [v for v in ring if v not in point]
        if missing:
            raise InputError(f"point lacks values for {missing}")
        return [point[v] for v in ring]
    point = list(point)
    if len(point) != len(ring):
        raise InputError("point dimension does not match ring")
    return point


def _add_terms(a, b, sign):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e)
        if v is None:
            out[e] = c * sign if sign != 1 else c
        else:
            v = v + c * sign
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def _mul_terms(a, b):
    if len(a) > len(b):
        a, b = b, a
    out: Dict[Monomial, mpq] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e)
            out[e] = ca * cb if v is None else v + ca * cb
    return {e: c for e, c in out.items() if c}


# ---------------------------------------------------------------- operations


def poly_add(a: Poly, b: Poly) -> Poly:
    if a.ring != b.ring:
        raise RingMismatchError(f"ring mismatch: {a.ring} vs {b.ring}")
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    if a.ring != b.ring:
        raise RingMismatchError(f"ring mismatch: {a.ring} vs {b.ring}")
    return a * b


def partial_derivative(p: Poly, var) -> Poly:
    i = _index(p.ring, var)
    out = {}
    for e, c in p.terms.items():
        if e[i]:
            out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
    return Poly._raw(p.ring, out)


def substitute(p: Poly, assignments: Mapping[str, Poly], target_ring: Sequence[str] | None = None) -> Poly:
    """Replace variables by polynomials over ``target_ring``.

    Variables without an assignment map to themselves, so they must exist in
    the target ring. Assigned values may be given as rationals.
    """
    target = tuple(target_ring) if target_ring is not None else p.ring
    images = []
    for name in p.ring:
        if name in assignments:
            val = assignments[name]
            if not isinstance(val, Poly):
                val = Poly.const(target, val)
            elif val.ring != target:
                val = val.change_ring(target)
            images.append(val)
        elif name in target:
            images.append(Poly.var(target, name))
        else:
            images.append(None)
    # cache powers per variable
    powers = [dict() for _ in images]
    result: Dict[Monomial, mpq] = {}
    for e, c in p.terms.items():
        term = Poly.const(target, c)
        for i, x in enumerate(e):
            if not x:
                continue
            if images[i] is None:
                raise RingMismatchError(f"variable {p.ring[i]!r} has no image in {target}")
            pw = powers[i].get(x)
            if pw is None:
                pw = images[i] ** x
                powers[i][x] = pw
            term = term * pw
        result = _add_terms(result, term.terms, mpq(1))
    return Poly._raw(target, result)


def invert_matrix(L: Sequence[Sequence[object]]):
    """Exact Gauss-Jordan inverse over the rationals."""
    n = len(L)
    if any(len(row) != n for row in L):
        raise InputError("matrix must be square")
    a = [[to_rational(x) for x in row] + [mpq(int(i == j)) for j in range(n)] for i, row in enumerate(L)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise InputError("singular coordinate change")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def linear_change(p: Poly, L: Sequence[Sequence[object]]) -> Poly:
    """Compose with ``z -> L z``: variable ``z_i`` becomes ``sum_j L[i][j] z_j``."""
    n = len(p.ring)
    if len(L) != n or any(len(row) != n for row in L):
        raise InputError(f"coordinate change must be {n}x{n}")
    invert_matrix(L)  # raises on singular L
    assignments = {}
    for i, name in enumerate(p.ring):
        row = {}
        for j in range(n):
            c = to_rational(L[i][j])
            if c:
                e = [0] * n
                e[j] = 1
                row[tuple(e)] = c
        assignments[name] = Poly._raw(p.ring, row)
    return substitute(p, assignments)


def content_normalize(p: Poly, order: MonomialOrder = GREVLEX) -> Poly:
    """Scale to primitive integer coefficients with a positive leading coefficient."""
    if p.is_zero():
        raise InputError("cannot normalize the zero polynomial")
    den = gmpy2.mpz(1)
    for c in p.terms.values():
        den = gmpy2.lcm(den, c.denominator)
    num = gmpy2.mpz(0)
    for c in p.terms.values():
        num = gmpy2.gcd(num, (c * den).numerator)
    scale = mpq(den, num)
    if p.leading_coefficient(order) < 0:
        scale = -scale
    return p * scale


def monic(p: Poly, order: MonomialOrder = GREVLEX) -> Poly:
    return p * (1 / p.leading_coefficient(order))


def ring_union(*rings: Iterable[str]) -> Tuple[str, ...]:
    out = []
    for r in rings:
        for v in r:
            if v not in out:
                out.append(v)
    return tuple(out)


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base
    while name in taken:
        name += "_"
    return name
