"""Symbolic-numeric estimation of growth exponents on algebraic sets.

The growth exponent of ``f`` on ``A`` is the least ``s >= 0`` with
``|f(x)| <= C (1 + |x|)^s`` on ``A`` (maximum norm). It is estimated by sampling
fibers of a proper projection over base points of increasing radius, fitting
the log-log slope of the per-radius envelope and snapping it to a small
rational.
"""

from __future__ import annotations

import math
import random
import statistics
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from gmpy2 import mpq

from .anormalizer import ANormalisation, pullback_extend
from .denominator import CAlgFunction
from .exceptions import InputError, NumericError
from .expr_io import Report
from .numeric import ComplexPoint, FiberCountWarning, fiber_solve, max_norm, roots_univariate
from .poly import Poly
from .variety import VarietyModel

__all__ = [
    "GrowthConfig",
    "GrowthEstimate",
    "estimate_growth",
    "check_prop52",
    "roots_univariate",
    "fiber_solve",
    "ComplexPoint",
    "snap_rational",
]


@dataclass(frozen=True)
class GrowthConfig:
    rmin: float = 10.0
    rmax: float = 1e6
    decades: int = 5
    samples: int = 4
    seed: int = 0
    snap_max_den: int = 12
    snap_tol: float = 0.05
    tol: float = 1e-6
    epsilon: float = 0.1

    def __post_init__(self):
        if not (0 < self.rmin < self.rmax) or not math.isfinite(self.rmax):
            raise InputError("need 0 < rmin < rmax")
        if self.decades < 1 or self.samples < 1:
            raise InputError("decades and samples must be positive")

    def radii(self) -> List[float]:
        ratio = self.rmax / self.rmin
        return [self.rmin * ratio ** (j / self.decades) for j in range(self.decades + 1)]


@dataclass
class GrowthEstimate:
    slope: float
    snapped: Optional[Fraction]
    residual: float
    samples_used: int
    per_decade: List[float] = field(default_factory=list)
    converged: bool = True
    config: Optional[GrowthConfig] = None

    @property
    def exponent(self) -> float:
        """Snapped value (or raw slope) clipped at zero, the estimate of the growth exponent."""
        value = float(self.snapped) if self.snapped is not None else self.slope
        return max(0.0, value)

    def to_dict(self):
        return {
            "slope": self.slope,
            "snapped": {"p": self.snapped.numerator, "q": self.snapped.denominator} if self.snapped is not None else None,
            "residual": self.residual,
            "per_decade": list(self.per_decade),
            "samples_used": self.samples_used,
            "converged": self.converged,
            "config": asdict(self.config) if self.config is not None else None,
        }


def snap_rational(x: float, max_den: int = 12, tol: float = 0.05) -> Optional[Fraction]:
    """Closest rational with denominator <= ``max_den``, if within ``tol``."""
    if not math.isfinite(x):
        return None
    q = Fraction(x).limit_denominator(max_den)
    return q if abs(float(q) - x) <= tol else None


def _rational(x: float, max_den: int = 10**6) -> mpq:
    q = Fraction(x).limit_denominator(max_den)
    return mpq(q.numerator, q.denominator)


def _directions(rng: random.Random, k: int, count: int):
    """Rational directions of unit maximum norm."""
    out = []
    for _ in range(count):
        v = [rng.uniform(-1.0, 1.0) for _ in range(k)]
        top = max(abs(c) for c in v) or 1.0
        out.append([_rational(c / top) for c in v])
    return out


def _as_function(f, A):
    if isinstance(f, CAlgFunction):
        return f, f.variety
    if isinstance(f, Poly):
        if A is None:
            raise InputError("a polynomial needs its variety")
        return CAlgFunction(A, f, 1, validate=False), A
    raise InputError(f"cannot estimate the growth of {type(f).__name__}")


def estimate_growth(f, A: Optional[VarietyModel] = None, cfg: GrowthConfig = GrowthConfig()) -> GrowthEstimate:
    """Fit the growth exponent of ``f`` over ``cfg.decades`` geometric radius steps.

    The same seeded set of base directions is reused at every radius so the
    envelope compares like with like; the fit uses the upper half of radii.
    """
    f, A = _as_function(f, A)
    if A.contains(f.den):
        raise InputError("denominator vanishes identically on the set")
    frame = A.frame(cfg.seed, tol=cfg.tol)
    rng = random.Random(cfg.seed)
    k = frame.k
    if k == 0:
        return GrowthEstimate(0.0, Fraction(0), 0.0, 0, [], True, cfg)
    dirs = _directions(rng, k, cfg.samples)
    xs, ys = [], []
    used = 0
    for r in cfg.radii():
        rq = _rational(r)
        best = None
        for direction in dirs:
            x0 = [rq * c for c in direction]
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", FiberCountWarning)
                    pts = fiber_solve(frame, A, x0, tol=cfg.tol)
                vals = [f.evaluate_complex(p) for p in pts]
            except NumericError:
                continue
            except OverflowError:
                raise NumericError(f"floating-point overflow at radius {r:.3g}") from None
            if len(pts) != frame.d:
                continue
            if any(v is None for v in vals):
                continue
            fmax = max(abs(v) for v in vals)
            norm = max(max_norm(p) for p in pts)
            used += 1
            if fmax == 0:
                continue
            pair = (math.log1p(norm), math.log(fmax))
            if best is None or pair[1] > best[1]:
                best = pair
        if best is not None:
            xs.append(best[0])
            ys.append(best[1])
    if used == 0:
        raise NumericError("no usable samples (all fibers failed or hit the denominator's zero set)")
    if len(xs) < 2:
        # f vanished on (almost) every sampled fiber
        return GrowthEstimate(0.0, Fraction(0), 0.0, used, [], True, cfg)
    secants = [(ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]) if xs[j + 1] != xs[j] else float("nan")
               for j in range(len(xs) - 1)]
    half = len(xs) // 2
    fx, fy = xs[half:], ys[half:]
    if len(fx) < 2:
        fx, fy = xs[-2:], ys[-2:]
    slope = statistics.linear_regression(fx, fy).slope
    tail = secants[half:] if len(secants) > half else secants[-1:]
    residual = max(abs(s - slope) for s in tail) if tail else 0.0
    converged = len(secants) < 2 or abs(secants[-1] - secants[-2]) < cfg.snap_tol
    snapped = snap_rational(slope, cfg.snap_max_den, cfg.snap_tol) if converged else None
    return GrowthEstimate(slope, snapped, residual, used, secants, converged, cfg)


def check_prop52(f: CAlgFunction, N: ANormalisation, cfg: GrowthConfig = GrowthConfig(), task_id: str = "prop52") -> Report:
    """Estimate B(f), B(f^) and B(h_i) and test ``B(f) >= B(f^) >= B(f) / max(1, B(h_i))``."""
    if not f.variety.same_set(N.base):
        raise InputError(f"{f.label()} is not a function on {N.base.name}")
    eps = cfg.epsilon
    b_f = estimate_growth(f, N.base, cfg)
    T = pullback_extend(f, N)
    N.variety.validate()
    b_hat = estimate_growth(CAlgFunction(N.variety, T, 1, validate=False), N.variety, cfg)
    b_h = [estimate_growth(h, N.base, cfg) for h in N.generators]
    big = max([1.0] + [e.exponent for e in b_h])
    upper = b_f.exponent + eps >= b_hat.exponent
    lower = b_hat.exponent + eps >= b_f.exponent / big
    status = "ok" if upper and lower else "fail"
    payload = {
        "B_f": b_f.to_dict(),
        "B_fhat": b_hat.to_dict(),
        "B_h": [e.to_dict() for e in b_h],
        "max_1_Bh": big,
        "upper_holds": upper,
        "lower_holds": lower,
        "epsilon": eps,
        "extension": str(T),
    }
    return Report(task_id, "check prop52", status, payload)
