"""Estimator-style wrappers (``fit`` / ``transform``) over the functional core.

Varieties play the role of training data: ``fit`` does the expensive exact
work once and stores it in trailing-underscore attributes.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .anormalizer import graph_ideal, pullback_extend, pushdown
from .denominator import CAlgFunction, represent, universal_denominator
from .exceptions import InputError
from .growth import GrowthConfig, estimate_growth
from .poly import Poly
from .validation import check_function, check_functions, check_polys, check_variety

__all__ = ["UniversalDenominatorEstimator", "ANormalizer", "GrowthEstimator"]


class UniversalDenominatorEstimator(BaseEstimator):
    """Fit a universal denominator ``Q`` on a variety; ``transform`` maps functions to ``R``."""

    def __init__(self, seed: int = 0):
        self.seed = seed

    def fit(self, X, y=None):
        A = check_variety(X)
        D = universal_denominator(A, seed=self.seed)
        self.variety_ = A
        self.denominator_ = D
        self.Q_ = D.Q
        self.P_ = D.P
        self.frame_ = D.frame
        self.covering_number_ = D.d
        return self

    def transform(self, X) -> List[Poly]:
        check_is_fitted(self, "denominator_")
        return [represent(f, self.denominator_) for f in check_functions(X, self.variety_)]


class ANormalizer(BaseEstimator):
    """Graph a-normalisation of a fixed generator list.

    ``transform`` pulls functions on the base set back to polynomials on the
    graph; ``inverse_transform`` pushes graph polynomials down to functions.
    """

    def __init__(self, generators: Sequence[CAlgFunction] = (), verify: bool = True):
        self.generators = generators
        self.verify = verify

    def fit(self, X, y=None):
        A = check_variety(X)
        gens = check_functions(list(self.generators), A)
        N = graph_ideal(A, gens, verify=self.verify)
        self.variety_ = A
        self.normalisation_ = N
        self.graph_ideal_ = N.graph_ideal
        self.n_generators_ = len(gens)
        return self

    def transform(self, X) -> List[Poly]:
        check_is_fitted(self, "normalisation_")
        return [pullback_extend(f, self.normalisation_) for f in check_functions(X, self.variety_)]

    def inverse_transform(self, X) -> List[CAlgFunction]:
        check_is_fitted(self, "normalisation_")
        return [pushdown(T, self.normalisation_) for T in check_polys(X, self.normalisation_.ring)]


class GrowthEstimator(BaseEstimator):
    """Growth exponent of one function; ``fit(f)`` or ``fit(poly, variety)``."""

    def __init__(self, rmin: float = 10.0, rmax: float = 1e6, decades: int = 5, samples: int = 4,
                 seed: int = 0, tol: float = 1e-6, snap_max_den: int = 12, snap_tol: float = 0.05):
        self.rmin = rmin
        self.rmax = rmax
        self.decades = decades
        self.samples = samples
        self.seed = seed
        self.tol = tol
        self.snap_max_den = snap_max_den
        self.snap_tol = snap_tol

    def _config(self) -> GrowthConfig:
        return GrowthConfig(rmin=self.rmin, rmax=self.rmax, decades=self.decades, samples=self.samples,
                            seed=self.seed, tol=self.tol, snap_max_den=self.snap_max_den, snap_tol=self.snap_tol)

    def fit(self, X, y=None):
        if isinstance(X, Poly) and y is None:
            raise InputError("pass the variety as the second argument when fitting a bare polynomial")
        f = check_function(X, check_variety(y) if y is not None else None)
        est = estimate_growth(f, f.variety, self._config())
        self.estimate_ = est
        self.slope_ = est.slope
        self.snapped_ = est.snapped
        self.exponent_ = est.exponent
        self.residual_ = est.residual
        return self

    def predict(self, X=None) -> float:
        """The fitted growth exponent (snapped when snapping succeeded)."""
        check_is_fitted(self, "estimate_")
        return self.exponent_
