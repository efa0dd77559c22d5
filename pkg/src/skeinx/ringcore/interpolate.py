"""Exact reconstruction of Laurent polynomials from point samples.

Samples live on a rectangular grid of rational (v, w) points.  Within a given
exponent box the Laurent polynomial matching the samples is unique once the
grid is large enough; two held-out samples verify the fit, and inconsistent
data raises :class:`InterpolationError` naming the failing point.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import LaurentPoly
from .rational import Point


class InterpolationError(ValueError):
    def __init__(self, message, point=None):
        self.point = point
        super().__init__(message if point is None else f"{message} at {point!r}")


def _lagrange_coeffs(xs, ys):
    """Coefficients (index = power) of the unique poly of degree < len(xs) through (xs, ys)."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        # basis polynomial prod_{j != i} (x - xs[j]) / (xs[i] - xs[j])
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        scale = Fraction(ys[i]) / denom
        for k in range(n):
            coeffs[k] += basis[k] * scale if k < len(basis) else 0
    return coeffs


def grid_points(nv, nw, seed=1):
    """Deterministic grid of admissible sample coordinates (distinct, nonzero)."""
    vs = [Fraction(k + seed + 1) for k in range(nv)]
    ws = [Fraction(k + seed + 1, 1) + Fraction(1, 2) for k in range(nw)]
    return vs, ws


def interpolate(samples, bounds, holdout=None):
    """Reconstruct the Laurent polynomial inside ``bounds`` from exact samples.

    samples: list of (Point, value) covering a full rectangular grid whose
        distinct v-coordinates number at least (amax - amin + 1) and distinct
        w-coordinates at least (bmax - bmin + 1).
    bounds: ((amin, amax), (bmin, bmax)) exponent box in (v, w).
    holdout: optional extra (Point, value) pairs checked after the fit; any
        sample beyond the minimal grid is also replayed as verification.
    """
    (amin, amax), (bmin, bmax) = bounds
    na = amax - amin + 1
    nb = bmax - bmin + 1
    by_v: dict[Fraction, dict[Fraction, Fraction]] = {}
    for pt, val in samples:
        by_v.setdefault(pt.v, {})[pt.w] = Fraction(val)
    vs = sorted(by_v)
    if len(vs) < na:
        raise InterpolationError(f"need {na} distinct v values, got {len(vs)}")
    ws = sorted(set(w for col in by_v.values() for w in col))
    if len(ws) < nb:
        raise InterpolationError(f"need {nb} distinct w values, got {len(ws)}")
    use_v, use_w = vs[:na], ws[:nb]
    for v in use_v:
        for w in use_w:
            if w not in by_v.get(v, {}):
                raise InterpolationError("grid not rectangular; missing sample",
                                         Point(v, w))
    # interpolate in w for each fixed v, on values * w^-bmin (polynomial in w)
    rows = {}
    for v in use_v:
        ys = [by_v[v][w] * w ** (-bmin) for w in use_w]
        rows[v] = _lagrange_coeffs(use_w, ys)  # index j -> coeff of w^(bmin+j)
    # then in v for each w-power
    terms = {}
    for j in range(nb):
        ys = [rows[v][j] * v ** (-amin) for v in use_v]
        cs = _lagrange_coeffs(use_v, ys)
        for i, c in enumerate(cs):
            if c:
                terms[(amin + i, bmin + j)] = c
    result = LaurentPoly(terms)
    # verify on every sample not used in the fit, plus explicit holdouts
    checks = [(pt, val) for pt, val in samples
              if pt.v not in use_v or pt.w not in use_w]
    checks.extend(holdout or [])
    for pt, val in checks:
        if result.eval(pt.v, pt.w) != Fraction(val):
            raise InterpolationError(
                "samples inconsistent with a Laurent polynomial in the given box", pt)
    return result
