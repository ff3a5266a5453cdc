"""Exact tools for c-algebraic functions on complex algebraic sets.

Universal denominators, graph a-normalisations, Nullstellensatz certificates
and numeric growth exponents, over an exact Gröbner-basis core.
"""

__version__ = "0.1.0"

from .anormalizer import ANormalisation, graph_ideal, pullback_extend, pushdown, transition_map, verify_anormal_instance
from .denominator import CAlgFunction, UniversalDenominator, check_denominator, minimal_unitary_poly, represent, universal_denominator
from .exceptions import AnormError, ComputationLimit, InputError, NumericError, ParseError, RingMismatchError, VerificationError
from .expr_io import Report, emit_report, parse_poly, print_canonical
from .groebner import Ideal, TrackedBasis, buchberger, divide, eliminate, ideal_equal, limits, member, normal_form, radical_member, saturate
from .growth import GrowthConfig, GrowthEstimate, check_prop52, estimate_growth, fiber_solve, roots_univariate
from .nullsatz import Certificate, NoCertificate, certificate, unit_ideal_check, verify_certificate
from .poly import GREVLEX, GRLEX, LEX, MonomialOrder, Poly
from .variety import NoetherFrame, VarietyModel, covering_number, dimension, noether_frame, properness_check

__all__ = [
    "ANormalisation", "graph_ideal", "pullback_extend", "pushdown", "transition_map", "verify_anormal_instance",
    "CAlgFunction", "UniversalDenominator", "check_denominator", "minimal_unitary_poly", "represent",
    "universal_denominator",
    "AnormError", "ComputationLimit", "InputError", "NumericError", "ParseError", "RingMismatchError",
    "VerificationError",
    "Report", "emit_report", "parse_poly", "print_canonical",
    "Ideal", "TrackedBasis", "buchberger", "divide", "eliminate", "ideal_equal", "limits", "member",
    "normal_form", "radical_member", "saturate",
    "GrowthConfig", "GrowthEstimate", "check_prop52", "estimate_growth", "fiber_solve", "roots_univariate",
    "Certificate", "NoCertificate", "certificate", "unit_ideal_check", "verify_certificate",
    "GREVLEX", "GRLEX", "LEX", "MonomialOrder", "Poly",
    "NoetherFrame", "VarietyModel", "covering_number", "dimension", "noether_frame", "properness_check",
]
