"""Exact Laurent polynomials in two variables v, w with rational coefficients.

A :class:`LaurentPoly` is a finite sum ``sum c[a,b] * v^a * w^b`` with exact
rational coefficients and integer (possibly negative) exponents.  The canonical
form used for hashing, text output and golden comparisons clears denominators:
integer coefficients of content 1, positive coefficient on the lex-largest
``(a, b)`` monomial, stored together with the rational unit that was removed.

No floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Exp = tuple[int, int]


def _coeff_add(x, y):
    s = x + y
    if isinstance(s, Fraction) and s.denominator == 1:
        return int(s)
    return s


class LaurentPoly:
    """Sparse Laurent polynomial in (v, w) over the rationals.

    Instances are immutable; all operations return new objects.  Coefficients
    are ``int`` where possible and ``Fraction`` otherwise; zero coefficients
    are never stored.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        t = {}
        if terms:
            for e, c in (terms.items() if isinstance(terms, dict) else terms):
                if c:
                    c0 = t.get(e)
                    if c0 is None:
                        t[e] = int(c) if isinstance(c, Fraction) and c.denominator == 1 else c
                    else:
                        s = _coeff_add(c0, c)
                        if s:
                            t[e] = s
                        else:
                            del t[e]
        self.terms = t
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero():
        return LaurentPoly()

    @staticmethod
    def one():
        return LaurentPoly({(0, 0): 1})

    @staticmethod
    def const(c):
        return LaurentPoly({(0, 0): c})

    @staticmethod
    def monomial(a, b, c=1):
        return LaurentPoly({(a, b): c})

    @staticmethod
    def var_v(power=1):
        return LaurentPoly({(power, 0): 1})

    @staticmethod
    def var_w(power=1):
        return LaurentPoly({(0, power): 1})

    # -- basic predicates ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(0, 0): 1}

    def is_monomial(self):
        return len(self.terms) == 1

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and (0, 0) in self.terms)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
        t = dict(self.terms)
        for e, c in other.terms.items():
            c0 = t.get(e)
            if c0 is None:
                t[e] = c
            else:
                s = _coeff_add(c0, c)
                if s:
                    t[e] = s
                else:
                    del t[e]
        r = LaurentPoly.__new__(LaurentPoly)
        r.terms = t
        r._hash = None
        return r

    def __neg__(self):
        r = LaurentPoly.__new__(LaurentPoly)
        r.terms = {e: -c for e, c in self.terms.items()}
        r._hash = None
        return r

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly()
            r = LaurentPoly.__new__(LaurentPoly)
            r.terms = {}
            for e, c in self.terms.items():
                p = c * other
                if isinstance(p, Fraction) and p.denominator == 1:
                    p = int(p)
                r.terms[e] = p
            r._hash = None
            return r
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return LaurentPoly()
        # multiply the smaller into the larger
        a, b = (self.terms, other.terms)
        if len(a) > len(b):
            a, b = b, a
        t = {}
        for (ea, eb), c in a.items():
            for (fa, fb), d in b.items():
                e = (ea + fa, eb + fb)
                p = c * d
                c0 = t.get(e)
                if c0 is None:
                    t[e] = p
                else:
                    s = _coeff_add(c0, p)
                    if s:
                        t[e] = s
                    else:
                        del t[e]
        for e, c in list(t.items()):
            if isinstance(c, Fraction) and c.denominator == 1:
                t[e] = int(c)
        r = LaurentPoly.__new__(LaurentPoly)
        r.terms = t
        r._hash = None
        return r

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a LaurentPoly; use RationalFn")
        r = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def shift(self, a, b):
        """Multiply by the monomial v^a w^b."""
        r = LaurentPoly.__new__(LaurentPoly)
        r.terms = {(ea + a, eb + b): c for (ea, eb), c in self.terms.items()}
        r._hash = None
        return r

    # -- structure ----------------------------------------------------------

    def lead_exp(self):
        """Lex-largest (a, b) exponent pair, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(self.terms)

    def min_exps(self):
        """(min v-exponent, min w-exponent) over all terms."""
        if not self.terms:
            return (0, 0)
        return (min(a for a, _ in self.terms), min(b for _, b in self.terms))

    def max_exps(self):
        if not self.terms:
            return (0, 0)
        return (max(a for a, _ in self.terms), max(b for _, b in self.terms))

    def degree_v(self):
        if not self.terms:
            return 0
        es = [a for a, _ in self.terms]
        return max(es) - min(es)

    def degree_w(self):
        if not self.terms:
            return 0
        es = [b for _, b in self.terms]
        return max(es) - min(es)

    def content(self):
        """Positive rational c such that self / c has integer coefficients of gcd 1."""
        if not self.terms:
            return Fraction(1)
        num_g = 0
        den_l = 1
        for c in self.terms.values():
            f = Fraction(c)
            num_g = gcd(num_g, f.numerator)
            den_l = den_l * f.denominator // gcd(den_l, f.denominator)
        return Fraction(num_g, den_l)

    def unit_normalize(self):
        """Return (unit, primitive) with self == unit * primitive.

        ``primitive`` has integer coefficients of content 1, minimal exponents
        (0, 0), and a positive coefficient on its lex-largest monomial; ``unit``
        is a rational multiple of a monomial.  This is the canonical form.
        """
        if not self.terms:
            return (Fraction(0), LaurentPoly())
        c = self.content()
        ma, mb = self.min_exps()
        t = {(a - ma, b - mb): int(Fraction(v) / c) for (a, b), v in self.terms.items()}
        prim = LaurentPoly(t)
        if prim.terms[prim.lead_exp()] < 0:
            prim = -prim
            c = -c
        return ((c, ma, mb), prim)

    def primitive(self):
        return self.unit_normalize()[1]

    def coeff(self, a, b):
        return self.terms.get((a, b), 0)

    # -- comparisons / hashing ----------------------------------------------

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset((e, Fraction(c)) for e, c in self.terms.items()))
        return self._hash

    # -- evaluation ----------------------------------------------------------

    def eval(self, v, w):
        """Evaluate exactly at rational (v, w); v, w must be nonzero."""
        total = 0
        for (a, b), c in self.terms.items():
            total += c * v ** a * w ** b
        return total

    def subs_powers(self, p, r):
        """Substitute v -> u^p, w -> u^r; returns a univariate Laurent dict {exp: coeff}."""
        out = {}
        for (a, b), c in self.terms.items():
            e = a * p + b * r
            c0 = out.get(e, 0)
            s = c0 + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return out

    # -- exact division -------------------------------------------------------

    def divexact(self, other):
        """Exact division; raises ValueError if ``other`` does not divide ``self``."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly()
        if other.is_monomial():
            ((a, b), c), = other.terms.items()
            r = LaurentPoly.__new__(LaurentPoly)
            r.terms = {}
            for (ea, eb), d in self.terms.items():
                q = Fraction(d, 1) / c if not isinstance(d, Fraction) else d / c
                if isinstance(q, Fraction) and q.denominator == 1:
                    q = int(q)
                r.terms[(ea - a, eb - b)] = q
            r._hash = None
            return r
        rem = self
        div_lead = other.lead_exp()
        div_c = other.terms[div_lead]
        # exact quotients live in a known exponent box
        pmin, omin = self.min_exps(), other.min_exps()
        pmax, omax = self.max_exps(), other.max_exps()
        qa_lo, qb_lo = pmin[0] - omin[0], pmin[1] - omin[1]
        qa_hi, qb_hi = pmax[0] - omax[0], pmax[1] - omax[1]
        if qa_hi < qa_lo or qb_hi < qb_lo:
            raise ValueError("inexact division")
        q_terms = {}
        while not rem.is_zero():
            le = rem.lead_exp()
            qa, qb = le[0] - div_lead[0], le[1] - div_lead[1]
            if not (qa_lo <= qa <= qa_hi and qb_lo <= qb <= qb_hi):
                raise ValueError("inexact division")
            qc = Fraction(rem.terms[le]) / div_c
            if qc.denominator == 1:
                qc = int(qc)
            q_terms[(qa, qb)] = qc
            rem = rem - other.shift(qa, qb) * qc
            if not rem.is_zero() and rem.lead_exp() >= le:
                raise ValueError("inexact division")
        return LaurentPoly(q_terms)

    def is_integral(self):
        return all(not isinstance(c, Fraction) for c in self.terms.values())

    # -- text / JSON ----------------------------------------------------------

    def text(self):
        """Canonical text: `(c) * v^a * w^b` monomials joined by ` + `, (a, b) desc-lex."""
        if not self.terms:
            return "(0)"
        parts = []
        for (a, b) in sorted(self.terms, reverse=True):
            c = self.terms[(a, b)]
            f = Fraction(c)
            cs = str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
            parts.append(f"({cs}) * v^{a} * w^{b}")
        return " + ".join(parts)

    def json_terms(self):
        out = []
        for (a, b) in sorted(self.terms, reverse=True):
            f = Fraction(self.terms[(a, b)])
            out.append([f.numerator, f.denominator, a, b])
        return out

    @staticmethod
    def from_json_terms(data):
        return LaurentPoly({(int(a), int(b)): Fraction(int(cn), int(cd)) for cn, cd, a, b in data})

    def __repr__(self):
        return f"LaurentPoly({self.text()})"


ZERO = LaurentPoly.zero()
ONE = LaurentPoly.one()
V = LaurentPoly.var_v()
W = LaurentPoly.var_w()
