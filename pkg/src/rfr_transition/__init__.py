"""Curve, swap and FVA mathematics for the EONIA to ESTR discounting transition."""

from .curves import EON, EST, ESTR_DELTA, DiscountCurve, apply_spread, flat_curve
from .errors import ConvergenceError, InputError, NumericalError, RfrError

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DiscountCurve",
    "EON",
    "EST",
    "ESTR_DELTA",
    "InputError",
    "NumericalError",
    "RfrError",
    "apply_spread",
    "flat_curve",
]
