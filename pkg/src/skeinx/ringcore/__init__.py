"""Exact arithmetic in the field of rational functions of (v, w)."""

from .laurent import LaurentPoly
from .rational import RationalFn, Point, PoleError, poly_gcd, as_scalar
from .brackets import (bracket, brace, psi, BracketExpr, LambdaRational,
                       UnbalancedError, cyclotomic, phi_at_one)
from .constants import named_constant, y_coeff, SIXBOX_DIMENSIONS, NAMES
from .interpolate import interpolate, InterpolationError, grid_points

__all__ = [
    "LaurentPoly", "RationalFn", "Point", "PoleError", "poly_gcd", "as_scalar",
    "bracket", "brace", "psi", "BracketExpr", "LambdaRational", "UnbalancedError",
    "cyclotomic", "phi_at_one", "named_constant", "y_coeff", "SIXBOX_DIMENSIONS",
    "NAMES", "interpolate", "InterpolationError", "grid_points",
]
