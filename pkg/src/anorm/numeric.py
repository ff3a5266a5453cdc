"""Complex univariate roots and numeric fibers of a proper projection."""

from __future__ import annotations

import cmath
import itertools
import math
import warnings
from typing import List, Sequence, Tuple

from .exceptions import NumericError
from .poly import Poly, substitute, to_rational

ComplexPoint = Tuple[complex, ...]

MAX_CANDIDATES = 10_000


class FiberCountWarning(RuntimeWarning):
    """A fiber had an unexpected number of points (likely near the branch locus)."""


def _horner(coeffs, z):
    p = 0j
    dp = 0j
    for c in coeffs:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def roots_univariate(coeffs: Sequence[complex], max_iter: int = 500) -> List[complex]:
    """All roots (with multiplicity) of ``coeffs[0] t^n + ... + coeffs[n]``.

    Aberth-Ehrlich simultaneous iteration on the polynomial rescaled so its
    roots lie in the unit disk. Exact zero roots are split off first.
    """
    coeffs = [complex(c) for c in coeffs]
    if len(coeffs) < 2:
        raise NumericError("polynomial must have degree >= 1")
    if coeffs[0] == 0:
        raise NumericError("leading coefficient is zero")
    if not all(cmath.isfinite(c) for c in coeffs):
        raise NumericError("non-finite coefficient")
    orig = list(coeffs)
    zeros = 0
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
        zeros += 1
    n = len(coeffs) - 1
    roots = [0j] * zeros
    if n == 0:
        return roots
    lead = coeffs[0]
    a = [c / lead for c in coeffs]
    # Fujiwara bound
    R = 2 * max(abs(a[k]) ** (1.0 / k) for k in range(1, n + 1))
    b = [a[k] / R ** k for k in range(n + 1)]
    s = [0.9 * cmath.exp(1j * (2 * math.pi * j / n + 0.4)) for j in range(n)]
    done = [False] * n
    for _ in range(max_iter):
        for j in range(n):
            if done[j]:
                continue
            p, dp = _horner(b, s[j])
            if p == 0:
                done[j] = True
                continue
            ratio = p / dp if dp != 0 else complex(1e-3)
            acc = 0j
            for l in range(n):
                if l != j:
                    diff = s[j] - s[l]
                    if diff != 0:
                        acc += 1 / diff
            denom = 1 - ratio * acc
            step = ratio / denom if denom != 0 else ratio
            s[j] -= step
            if abs(step) <= 4e-16 * max(1.0, abs(s[j])):
                done[j] = True
        if all(done):
            break
    found = [R * z for z in s]
    # Newton polish on the original (monic) polynomial
    polished = []
    for z in found:
        for _ in range(3):
            p, dp = _horner(a, z)
            if dp == 0 or p == 0:
                break
            nz = z - p / dp
            if abs(_horner(a, nz)[0]) < abs(p):
                z = nz
            else:
                break
        polished.append(z)
    roots.extend(polished)
    scale = max([1.0] + [abs(r) for r in roots])
    bound = 1e-8 * max(abs(c) for c in orig) * scale ** (len(orig) - 1)
    for r in roots:
        if abs(_horner(orig, r)[0]) > bound:
            raise NumericError(f"root finder did not converge (residual at {r})")
    return roots


def univariate_coeffs(p: Poly, var) -> List[complex]:
    """Coefficients (highest first) of ``p`` viewed in ``var`` alone; all other variables must be absent."""
    i = p.ring.index(var)
    deg = p.degree_in(var)
    out = [0j] * (deg + 1)
    for e, c in p.terms.items():
        if any(x for k, x in enumerate(e) if k != i):
            raise NumericError(f"polynomial is not univariate in {var}")
        out[deg - e[i]] += float(c)
    return out


def cluster(values: Sequence[complex], tol: float) -> List[complex]:
    """Merge values closer than ``tol * scale`` (first representative wins)."""
    scale = max([1.0] + [abs(v) for v in values])
    out: List[complex] = []
    for v in values:
        if all(abs(v - w) > tol * scale for w in out):
            out.append(v)
    return out


def _dedupe_points(points, tol):
    out = []
    for p in points:
        scale = max([1.0] + [abs(c) for c in p])
        if all(max(abs(a - b) for a, b in zip(p, q)) > tol * scale for q in out):
            out.append(p)
    return out


def fiber_solve(frame, A, base_point: Sequence[object], tol: float = 1e-6, expected=None) -> List[ComplexPoint]:
    """Points of ``A`` over a rational base point, in original coordinates.

    ``frame`` supplies the unitary polynomial (in the primitive coordinate) and one
    monic witness per remaining coordinate; candidate tuples are filtered by the
    relative residual of every generator of the transformed ideal.
    """
    k = frame.k
    ring = frame.ring
    x0 = [to_rational(v) for v in base_point]
    if len(x0) != k:
        raise NumericError(f"base point must have {k} coordinates")
    if frame.k == len(ring):
        pt = tuple(complex(float(v)) for v in x0)
        return [frame.to_original(pt)]
    assign = {ring[i]: x0[i] for i in range(k)}
    per_var: List[List[complex]] = []
    for v in ring[k:]:
        w = frame.witness_for(v)
        uni = substitute(w, assign)
        coeffs = univariate_coeffs(uni, v)
        if len(coeffs) < 2:
            raise NumericError(f"witness for {v} degenerates at the base point")
        per_var.append(cluster(roots_univariate(coeffs), tol))
    total = 1
    for r in per_var:
        total *= len(r)
    if total > MAX_CANDIDATES:
        raise NumericError(f"fiber candidate explosion ({total} tuples)")
    base_c = [complex(float(v)) for v in x0]
    gens = frame.transformed_generators
    points = []
    for combo in itertools.product(*per_var):
        pt = tuple(base_c) + tuple(combo)
        ok = True
        for g in gens:
            val = abs(g.evaluate_complex(pt))
            if val > tol * max(g.absolute_scale(pt), 1e-300):
                ok = False
                break
        if ok:
            points.append(pt)
    points = _dedupe_points(points, tol)
    if expected is not None and len(points) != expected:
        warnings.warn(f"fiber over {[str(v) for v in x0]} has {len(points)} points, expected {expected}",
                      FiberCountWarning, stacklevel=2)
    return [frame.to_original(p) for p in points]


def max_norm(point: Sequence[complex]) -> float:
    return max((abs(c) for c in point), default=0.0)
