"""Rational functions num/den of Laurent polynomials in (v, w), kept reduced.

The reduced canonical form fixes the denominator to be a primitive integer
polynomial (content 1, positive lex-leading coefficient, minimal exponents
(0, 0)); the numerator then carries all rational and monomial units.  Two
rational functions are equal iff their canonical (num, den) pairs are equal.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import LaurentPoly
from . import polygcd

try:
    from gmpy2 import mpq  # much faster exact rationals for point evaluation

    def as_scalar(x):
        return mpq(x.numerator, x.denominator) if isinstance(x, Fraction) else mpq(x)
except ImportError:  # pragma: no cover
    def as_scalar(x):
        return Fraction(x)

    mpq = Fraction


class PoleError(ZeroDivisionError):
    """Raised when a denominator vanishes at a substitution point."""

    def __init__(self, den, point):
        self.den = den
        self.point = point
        super().__init__(f"denominator {den.text()} vanishes at {point}")


class Point:
    """An exact rational substitution point (v, w), both nonzero."""

    __slots__ = ("v", "w")

    def __init__(self, v, w):
        v = Fraction(v)
        w = Fraction(w)
        if v == 0 or w == 0:
            raise ValueError("point coordinates must be nonzero")
        self.v = v
        self.w = w

    def __eq__(self, other):
        return isinstance(other, Point) and self.v == other.v and self.w == other.w

    def __hash__(self):
        return hash((self.v, self.w))

    def __repr__(self):
        return f"Point(v={self.v}, w={self.w})"


def _to_blist(p: LaurentPoly):
    """Primitive integer LaurentPoly with min exps (0,0) -> (Z[v])[w] list form."""
    if not p.terms:
        return []
    maxw = max(b for _, b in p.terms)
    maxv = max(a for a, _ in p.terms)
    out = [[0] * (maxv + 1) for _ in range(maxw + 1)]
    for (a, b), c in p.terms.items():
        out[b][a] = c
    return [polygcd._utrim(row) for row in out]


def _from_blist(rows):
    terms = {}
    for b, row in enumerate(rows):
        for a, c in enumerate(row):
            if c:
                terms[(a, b)] = c
    return LaurentPoly(terms)


def poly_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """GCD of the primitive parts, as a primitive LaurentPoly (1 if coprime)."""
    pp = p.primitive()
    qq = q.primitive()
    if pp.is_zero():
        return qq
    if qq.is_zero():
        return pp
    if pp.is_monomial() or qq.is_monomial():
        return LaurentPoly.one()
    g = polygcd.bgcd(_to_blist(pp), _to_blist(qq))
    gp = _from_blist(g).primitive()
    return gp if gp.terms else LaurentPoly.one()


def _factor_library():
    """Primitive irreducible-enough factors that exhaust every denominator the
    engine produces: the symmetrized cyclotomics and the small quantum
    brackets in both variables."""
    from .brackets import psi, bracket
    lib = []
    for n in (1, 2, 3, 4, 5, 6, 7, 8, 10, 12):
        lib.append(psi(n).primitive())
    for k in (1, 2, 3, 4, 5):
        for n in range(-8, 9):
            if k == 0 and n == 0:
                continue
            lib.append(bracket(k, n).primitive())
    seen = set()
    out = []
    for p in lib:
        if p not in seen and not p.is_monomial():
            seen.add(p)
            out.append(p)
    return out


_LIBRARY = None
_LIBVALS = None


def _int_eval_at(p: LaurentPoly, pv: int, pw: int) -> int:
    ma, mb = p.min_exps()
    total = 0
    for (a, b), c in p.terms.items():
        total += c * pv ** (a - ma) * pw ** (b - mb)
    return int(total)


def _int_eval(p: LaurentPoly) -> int:
    """Integer value of the min-shifted polynomial at (v, w) = (5, 7); exact
    division p = phi * q implies the corresponding integers divide."""
    return _int_eval_at(p, 5, 7)


def factor_library():
    global _LIBRARY
    if _LIBRARY is None:
        _LIBRARY = _factor_library()
    return _LIBRARY


def _library_values():
    global _LIBVALS
    if _LIBVALS is None:
        _LIBVALS = [_int_eval(p) for p in factor_library()]
        assert all(v != 0 for v in _LIBVALS)
    return _LIBVALS


class RationalFn:
    """Reduced quotient of Laurent polynomials; the engine's scalar type."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _reduced=False):
        if isinstance(num, (int, Fraction)):
            num = LaurentPoly.const(num)
        if den is None:
            den = LaurentPoly.one()
        elif isinstance(den, (int, Fraction)):
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            num = num * (1 / Fraction(den))
            den = LaurentPoly.one()
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            num, den = self._reduce(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def _reduce(num, den):
        if num.is_zero():
            return num, LaurentPoly.one()
        (dc, da, db), dprim = den.unit_normalize()
        num = num.shift(-da, -db) * (1 / Fraction(dc))
        den = dprim
        if den.is_one():
            return num, den
        # factor the denominator over the library, cancelling into num
        (nc, na, nb), nprim = num.unit_normalize()
        leftover = den
        new_den = LaurentPoly.one()
        lib = factor_library()
        vals = _library_values()
        lv = _int_eval(leftover)
        nv = _int_eval(nprim)
        for phi, pv in zip(lib, vals):
            if lv != 0 and lv % pv:
                continue
            mult = 0
            while True:
                if lv != 0 and lv % pv:
                    break
                try:
                    leftover = leftover.divexact(phi)
                    mult += 1
                    lv = _int_eval(leftover)
                except ValueError:
                    break
            while mult:
                if nv != 0 and nv % pv:
                    break
                try:
                    nprim = nprim.divexact(phi)
                    mult -= 1
                    nv = _int_eval(nprim)
                except ValueError:
                    break
            for _ in range(mult):
                new_den = new_den * phi
            if leftover.is_one() or leftover.is_monomial():
                break
        if not (leftover.is_one() or leftover.is_monomial()):
            # denominator outside the library: fall back to a real gcd, unless
            # integer evaluations certify coprimality
            from math import gcd as _igcd
            certified_coprime = False
            for pt in ((5, 7), (3, 11), (7, 13), (2, 5), (11, 3)):
                a = _int_eval_at(nprim, *pt)
                c = _int_eval_at(leftover, *pt)
                if a and c and _igcd(a, c) == 1:
                    certified_coprime = True
                    break
            if not certified_coprime:
                g = poly_gcd(nprim, leftover)
                if not g.is_one():
                    nprim = nprim.divexact(g)
                    leftover = leftover.divexact(g)
        den = new_den * leftover
        num = nprim.shift(na, nb) * nc
        (dc, da, db), dprim = den.unit_normalize()
        num = num.shift(-da, -db) * (1 / Fraction(dc))
        return num, dprim

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero():
        return RationalFn(LaurentPoly.zero(), LaurentPoly.one(), _reduced=True)

    @staticmethod
    def one():
        return RationalFn(LaurentPoly.one(), LaurentPoly.one(), _reduced=True)

    @staticmethod
    def from_poly(p):
        return RationalFn(p, LaurentPoly.one(), _reduced=True)

    @staticmethod
    def monomial(a, b, c=1):
        return RationalFn(LaurentPoly.monomial(a, b, c), LaurentPoly.one(), _reduced=True)

    # -- predicates ------------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_poly(self):
        return self.den.is_one()

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return RationalFn.zero()
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFn(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inv()

    def __pow__(self, n):
        if n == 0:
            return RationalFn.one()
        if n < 0:
            return self.inv() ** (-n)
        r = RationalFn.one()
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    # -- comparisons ---------------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num == other.num and self.den == other.den:
            return True
        # sound fallback, independent of how far reduction got
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- evaluation -------------------------------------------------------------------

    def evaluate_at(self, point: Point):
        """Exact rational value at the point; raises PoleError on a vanishing denominator."""
        dv = self.den.eval(point.v, point.w)
        if dv == 0:
            raise PoleError(self.den, point)
        return self.num.eval(point.v, point.w) / dv

    def subs_powers(self, p, r):
        """Substitute v -> u^p, w -> u^r; returns (num_dict, den_dict) in u-exponents."""
        return self.num.subs_powers(p, r), self.den.subs_powers(p, r)

    # -- text / JSON ----------------------------------------------------------------------

    def text(self):
        if self.den.is_one():
            return self.num.text()
        return f"{self.num.text()} / {self.den.text()}"

    def to_json(self):
        return {"num": self.num.json_terms(), "den": self.den.json_terms()}

    @staticmethod
    def from_json(data):
        return RationalFn(LaurentPoly.from_json_terms(data["num"]),
                          LaurentPoly.from_json_terms(data["den"]))

    def __repr__(self):
        return f"RationalFn({self.text()})"


def _div_by_prim(num, g):
    """Divide a rational-coefficient Laurent poly by a primitive poly that divides its primitive part."""
    (c, a, b), prim = num.unit_normalize()
    return prim.divexact(g).shift(a, b) * c


def _coerce(x):
    if isinstance(x, RationalFn):
        return x
    if isinstance(x, LaurentPoly):
        return RationalFn.from_poly(x)
    if isinstance(x, (int, Fraction)):
        return RationalFn(LaurentPoly.const(x), LaurentPoly.one(), _reduced=True) \
            if x else RationalFn.zero()
    return NotImplemented
