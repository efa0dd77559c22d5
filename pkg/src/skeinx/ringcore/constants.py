"""Named constants of the skein theory, as reduced rational functions.

  d : value of a closed circle (the quantum dimension of the generator)
  b : bigon collapse factor
  t : triangle collapse factor
  alpha : the crossing-term coefficient -[1,0][1,-1]/psi(1) that appears in
          the six-term vertex relation
  x1..x4 : the four planar coefficients of the square relation
  y1..y4 : the square-relation coefficients in the (b, alpha) presentation,
           kept as documented data and exposed as functions of b and alpha

All are cached; the cache is read-only after first computation and safe for
concurrent readers.
"""

from __future__ import annotations

from .laurent import LaurentPoly
from .rational import RationalFn
from .brackets import BracketExpr, bracket, brace, psi

_cache: dict[str, RationalFn] = {}


def _poly(terms) -> LaurentPoly:
    return LaurentPoly(terms)


def _build(name: str) -> RationalFn:
    if name == "d":
        # -psi4 [1,5][1,-6] / ([1,0][1,-1])
        return BracketExpr(
            [("psi", 0, 4, 1), ("bracket", 1, 5, 1), ("bracket", 1, -6, 1),
             ("bracket", 1, 0, -1), ("bracket", 1, -1, -1)],
            RationalFn(-1),
        ).expand()
    if name == "b":
        # {1,2}{1,-3} psi3
        return BracketExpr(
            [("brace", 1, 2, 1), ("brace", 1, -3, 1), ("psi", 0, 3, 1)]
        ).expand()
    if name == "t":
        # psi2 ( psi2 {2,-1} + (v^4 - v^2 - 1 - v^-2 + v^-4) )
        inner = RationalFn.from_poly(psi(2)) * RationalFn.from_poly(brace(2, -1)) \
            + RationalFn.from_poly(_poly({(4, 0): 1, (2, 0): -1, (0, 0): -1,
                                          (-2, 0): -1, (-4, 0): 1}))
        return RationalFn.from_poly(psi(2)) * inner
    if name == "alpha":
        # -[1,0][1,-1]/psi1
        return BracketExpr(
            [("bracket", 1, 0, 1), ("bracket", 1, -1, 1), ("psi", 0, 1, -1)],
            RationalFn(-1),
        ).expand()
    if name == "x1":
        return RationalFn.from_poly(_poly({
            (0, -2): 1, (2, -2): -1, (4, -2): -1,
            (-4, 0): 1, (-2, 0): -2, (2, 0): 3,
            (-2, 2): 1, (0, 2): -1, (2, 2): -1,
        }))
    if name == "x2":
        return RationalFn.from_poly(_poly({
            (-2, -2): 1, (0, -2): 1, (2, -2): -1,
            (-2, 0): -3, (2, 0): 2, (4, 0): -1,
            (-4, 2): 1, (-2, 2): 1, (0, 2): -1,
        }))
    if name == "x3":
        return RationalFn.from_poly(_poly({
            (-2, -4): 1, (0, -4): -1,
            (-4, -2): -2, (-2, -2): -1, (0, -2): 2, (4, -2): -1,
            (-6, 0): 1, (-4, 0): 4, (-2, 0): -2, (0, 0): -1, (2, 0): 1, (4, 0): 1,
            (-6, 2): -2, (-4, 2): -1, (-2, 2): 2, (2, 2): -1,
            (-6, 4): 1, (-4, 4): -1,
        }))
    if name == "x4":
        return RationalFn.from_poly(_poly({
            (4, -4): -1, (6, -4): 1,
            (-2, -2): -1, (2, -2): 2, (4, -2): -1, (6, -2): -2,
            (-4, 0): 1, (-2, 0): 1, (0, 0): -1, (2, 0): -2, (4, 0): 4, (6, 0): 1,
            (-4, 2): -1, (0, 2): 2, (2, 2): -1, (4, 2): -2,
            (0, 4): -1, (2, 4): 1,
        }))
    raise KeyError(name)


# y-coefficients of the square relation in the (b, alpha) presentation.
# Stored as (sign on b, v-Laurent multiplying alpha); that presentation is
# otherwise out of scope here, but these let the two published forms of the
# square relation be cross-checked against each other.
Y_DATA = {
    "y1": (-1, {(-5, 0): -1, (-3, 0): 1, (1, 0): 2, (3, 0): 1, (5, 0): 2, (7, 0): 1}),
    "y2": (-1, {(-7, 0): -1, (-5, 0): -2, (-3, 0): -1, (-1, 0): -2, (3, 0): -1, (5, 0): 1}),
    "y3": (1, {(-9, 0): -1, (-7, 0): 1, (-5, 0): -1, (-3, 0): 1, (-1, 0): -1, (1, 0): 1}),
    "y4": (1, {(-1, 0): -1, (1, 0): 1, (3, 0): -1, (5, 0): 1, (7, 0): -1, (9, 0): 1}),
}


def y_coeff(name: str, b: RationalFn, alpha: RationalFn) -> RationalFn:
    sign, avec = Y_DATA[name]
    return b * sign + alpha * RationalFn.from_poly(_poly(avec))


NAMES = ("d", "b", "t", "alpha", "x1", "x2", "x3", "x4")


def named_constant(name: str) -> RationalFn:
    """Exact value of a named constant; raises KeyError for unknown names."""
    if name in ("y1", "y2", "y3", "y4"):
        return y_coeff(name, named_constant("b"), named_constant("alpha"))
    r = _cache.get(name)
    if r is None:
        r = _build(name)
        _cache[name] = r
    return r


# The quantum-dimension formulas for the eleven kinds of minimal idempotents
# in the 6-box space, keyed by the full-twist eigenvalue exponents (p, r)
# meaning eigenvalue v^p w^r.  Each value is (name, multiplicity in the
# third tensor power, BracketExpr factors); quantum dimension = the expanded
# expression, classical dimension = its classical limit.
def _dim(br_num, br_den, sign=1):
    factors = [("bracket", k, n, 1) for k, n in br_num]
    factors += [("bracket", k, n, -1) for k, n in br_den]
    return BracketExpr(factors, RationalFn(sign))


SIXBOX_DIMENSIONS = {
    (36, 0): ("unit", 1, _dim([], [])),
    (24, 0): ("X1", 5, _dim([(0, 4), (1, 5), (1, -6)], [(0, 2), (1, 0), (1, -1)], -1)),
    (12, 0): ("X2", 4, _dim([(0, 5), (1, 5), (1, 3), (1, -4), (1, -6), (2, 4), (2, -6)],
                            [(0, 1), (1, 2), (1, 0), (1, -1), (1, -3), (2, 0), (2, -2)])),
    (12, 4): ("Y2", 3, _dim([(0, 4), (0, 5), (0, 6), (1, 5), (1, -4), (3, -6)],
                            [(0, 2), (1, 0), (1, -1), (1, -2), (2, 0), (2, -1)], -1)),
    (16, -4): ("Y2p", 3, _dim([(0, 4), (0, 5), (0, 6), (1, -6), (1, 3), (3, 3)],
                              [(0, 2), (1, -1), (1, 0), (1, 1), (2, -2), (2, -1)], -1)),
    (0, 0): ("X3", 1, _dim([(0, 4), (0, 5), (1, 5), (1, 4), (1, -5), (1, -6),
                            (2, 4), (2, -6), (3, 3), (3, -6)],
                           [(0, 1), (0, 2), (1, 1), (1, 0), (1, -1), (1, -2),
                            (2, 0), (2, -2), (3, 0), (3, -3)], -1)),
    (0, 12): ("Y3", 1, _dim([(0, 4), (0, 5), (0, 6), (1, 5), (1, -4), (1, -5),
                             (1, -6), (2, -4), (5, -6)],
                            [(0, 2), (1, 0), (1, -1), (1, -2), (2, 0), (2, -1),
                             (2, -2), (3, 0), (3, -1)], -1)),
    (12, -12): ("Y3p", 1, _dim([(0, 4), (0, 5), (0, 6), (1, -6), (1, 3), (1, 4),
                                (1, 5), (2, 2), (5, 1)],
                               [(0, 2), (1, -1), (1, 0), (1, 1), (2, -2), (2, -1),
                                (2, 0), (3, -3), (3, -2)], -1)),
    (4, 0): ("A", 3, _dim([(0, 6), (1, 5), (1, 4), (1, 3), (1, -4), (1, -5),
                           (1, -6), (3, -6), (3, 3)],
                          [(0, 2), (1, 1), (1, 0), (1, 0), (1, -1), (1, -1),
                           (1, -2), (3, -1), (3, -2)], -1)),
    (0, 6): ("C", 2, _dim([(0, 4), (0, 5), (0, 6), (1, 5), (1, 3), (1, -5),
                           (2, 4), (2, -4), (2, -6), (4, -6)],
                          [(0, 1), (1, 2), (1, 0), (1, 0), (1, -1), (1, -2),
                           (2, -1), (2, -3), (3, 0), (3, -2)])),
    (6, -6): ("Cp", 2, _dim([(0, 4), (0, 5), (0, 6), (1, -6), (1, -4), (1, 4),
                             (2, -6), (2, 2), (2, 4), (4, 2)],
                            [(0, 1), (1, -3), (1, -1), (1, -1), (1, 0), (1, 1),
                             (2, -1), (2, 1), (3, -3), (3, -1)])),
}
