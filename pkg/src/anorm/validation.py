"""Input checks shared by the estimator layer."""

from __future__ import annotations

from typing import List, Sequence

from .denominator import CAlgFunction
from .exceptions import InputError
from .poly import Poly
from .variety import VarietyModel

__all__ = ["check_variety", "check_function", "check_functions", "check_polys"]


def check_variety(X) -> VarietyModel:
    if not isinstance(X, VarietyModel):
        raise InputError(f"expected a VarietyModel, got {type(X).__name__}")
    return X.validate()


def check_function(f, variety: VarietyModel | None = None) -> CAlgFunction:
    """Accept a CAlgFunction (or a Poly, given the variety) living on ``variety``."""
    if isinstance(f, Poly):
        if variety is None:
            raise InputError("a bare polynomial needs its variety")
        f = CAlgFunction(variety, f, 1)
    if not isinstance(f, CAlgFunction):
        raise InputError(f"expected a CAlgFunction, got {type(f).__name__}")
    if variety is not None and not f.variety.same_set(variety):
        raise InputError(f"{f.label()} does not live on {variety.name}")
    return f


def check_functions(X, variety: VarietyModel | None = None) -> List[CAlgFunction]:
    if isinstance(X, (CAlgFunction, Poly)):
        X = [X]
    if not isinstance(X, Sequence) or isinstance(X, str):
        raise InputError("expected a sequence of functions")
    return [check_function(f, variety) for f in X]


def check_polys(X, ring) -> List[Poly]:
    if isinstance(X, Poly):
        X = [X]
    out = []
    for p in X:
        if not isinstance(p, Poly):
            raise InputError(f"expected a Poly, got {type(p).__name__}")
        if p.ring != tuple(ring):
            p = p.change_ring(ring)
        out.append(p)
    return out
