"""Two-variable quantum brackets, braces and symmetrized cyclotomics.

  bracket(k, n) = [k,n] = w^k v^n - w^-k v^-n
  brace(k, n)   = {k,n} = w^k v^n + w^-k v^-n
  psi(n)        = v^-phi(n) * Phi_n(v^2)   (Phi_n the n-th cyclotomic polynomial)

The symbol usually written "lambda" lives only inside bracket notation: [k,n]
stands for the expression traditionally written [k*lambda + n].  A
:class:`BracketExpr` is a product of such factors with integer exponents times
a rational-function prefactor; it can be expanded exactly, or sent to its
classical limit, a rational function of lambda.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .laurent import LaurentPoly
from .rational import RationalFn
from . import polygcd


@lru_cache(maxsize=None)
def cyclotomic(n: int):
    """Coefficient list of the n-th cyclotomic polynomial Phi_n(x)."""
    if n < 1:
        raise ValueError("n must be positive")
    p = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            p = polygcd.udivexact(p, list(cyclotomic(d)))
    return tuple(p)


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if _gcd(k, n) == 1)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@lru_cache(maxsize=None)
def bracket(k: int, n: int) -> LaurentPoly:
    """[k,n] = w^k v^n - w^-k v^-n; zero when k = n = 0."""
    if k == 0 and n == 0:
        return LaurentPoly.zero()
    return LaurentPoly({(n, k): 1, (-n, -k): -1})


@lru_cache(maxsize=None)
def brace(k: int, n: int) -> LaurentPoly:
    """{k,n} = w^k v^n + w^-k v^-n."""
    if k == 0 and n == 0:
        return LaurentPoly.const(2)
    return LaurentPoly({(n, k): 1, (-n, -k): 1})


@lru_cache(maxsize=None)
def psi(n: int) -> LaurentPoly:
    """psi(n) = v^-phi(n) Phi_n(v^2), a w-free symmetric Laurent polynomial."""
    if n < 1:
        raise ValueError("psi requires n >= 1")
    phi = totient(n)
    coeffs = cyclotomic(n)
    return LaurentPoly({(2 * i - phi, 0): c for i, c in enumerate(coeffs) if c})


@lru_cache(maxsize=None)
def phi_at_one(n: int) -> int:
    """Phi_n(1): p when n is a prime power p^k (n >= 2), else 1."""
    return sum(cyclotomic(n)) if n >= 2 else 0


# --------------------------------------------------------------------------- #


class UnbalancedError(ValueError):
    """Classical limit of an expression with unmatched bracket counts."""


class LambdaRational:
    """A rational function of lambda with exact rational coefficients."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        # num, den: lists of Fraction coefficients, index = power of lambda
        self.num = [Fraction(c) for c in num]
        self.den = [Fraction(c) for c in (den if den is not None else [1])]
        while self.num and not self.num[-1]:
            self.num.pop()
        while self.den and not self.den[-1]:
            self.den.pop()
        if not self.den:
            raise ZeroDivisionError("zero denominator")

    @staticmethod
    def const(c):
        return LambdaRational([Fraction(c)])

    @staticmethod
    def linear(k, n):
        """k*lambda + n."""
        return LambdaRational([Fraction(n), Fraction(k)])

    def __mul__(self, other):
        return LambdaRational(_umulq(self.num, other.num), _umulq(self.den, other.den))

    def __add__(self, other):
        num = _uaddq(_umulq(self.num, other.den), _umulq(other.num, self.den))
        return LambdaRational(num, _umulq(self.den, other.den))

    def inv(self):
        if not self.num:
            raise ZeroDivisionError
        return LambdaRational(self.den, self.num)

    def eval_at(self, lam) -> Fraction:
        lam = Fraction(lam)
        nv = sum(c * lam ** i for i, c in enumerate(self.num))
        dv = sum(c * lam ** i for i, c in enumerate(self.den))
        if dv == 0:
            raise ZeroDivisionError(f"pole at lambda={lam}")
        return nv / dv

    def __repr__(self):
        def side(cs):
            return " + ".join(f"({c})*lam^{i}" for i, c in enumerate(cs) if c) or "0"
        return f"LambdaRational(({side(self.num)}) / ({side(self.den)}))"


def _umulq(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _uaddq(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


class BracketExpr:
    """Product of bracket/brace/psi factors with a rational-function prefactor.

    factors: list of (kind, k, n, exponent) with kind in {"bracket", "brace", "psi"};
    for "psi" the k slot is unused and set to 0.
    """

    __slots__ = ("factors", "prefactor")

    def __init__(self, factors, prefactor=None):
        self.factors = [(str(kind), int(k), int(n), int(e)) for kind, k, n, e in factors]
        self.prefactor = prefactor if prefactor is not None else RationalFn.one()

    def expand(self) -> RationalFn:
        """Multiply out all factors into a reduced RationalFn."""
        r = self.prefactor
        for kind, k, n, e in self.factors:
            if kind == "bracket":
                base = RationalFn.from_poly(bracket(k, n))
            elif kind == "brace":
                base = RationalFn.from_poly(brace(k, n))
            elif kind == "psi":
                base = RationalFn.from_poly(psi(n))
            else:
                raise ValueError(f"unknown factor kind {kind!r}")
            r = r * base ** e
        return r

    def evaluate_at(self, point) -> Fraction:
        """Exact value at a point, factor by factor (never expanded)."""
        from .rational import PoleError
        total = Fraction(self.prefactor.num.eval(point.v, point.w))
        dv = self.prefactor.den.eval(point.v, point.w)
        if dv == 0:
            raise PoleError(self.prefactor.den, point)
        total /= dv
        for kind, k, n, e in self.factors:
            if kind == "bracket":
                base = bracket(k, n)
            elif kind == "brace":
                base = brace(k, n)
            else:
                base = psi(n)
            val = Fraction(base.eval(point.v, point.w))
            if e < 0 and val == 0:
                raise PoleError(base, point)
            total *= val ** e
        return total

    def classical_limit(self) -> LambdaRational:
        """Limit v,w -> 1 along w = v^lambda, as a rational function of lambda.

        Each [k,n] becomes (k*lambda + n), each brace becomes 2, and psi(n)
        becomes Phi_n(1) for n >= 2 (psi(1), like [0,1], becomes 1).  The
        bracket degree (including psi(1) factors) must balance to zero and the
        prefactor must be finite and computed at v = w = 1.
        """
        balance = 0
        r = LambdaRational.const(1)
        for kind, k, n, e in self.factors:
            if kind == "bracket":
                balance += e
                f = LambdaRational.linear(k, n)
            elif kind == "brace":
                f = LambdaRational.const(2)
            elif kind == "psi":
                if n == 1:
                    balance += e
                    f = LambdaRational.const(1)
                else:
                    f = LambdaRational.const(phi_at_one(n))
            else:
                raise ValueError(f"unknown factor kind {kind!r}")
            if e >= 0:
                for _ in range(e):
                    r = r * f
            else:
                fi = f.inv()
                for _ in range(-e):
                    r = r * fi
        if balance != 0:
            raise UnbalancedError(f"bracket balance {balance} != 0; classical limit undefined")
        nv = self.prefactor.num.eval(Fraction(1), Fraction(1))
        dv = self.prefactor.den.eval(Fraction(1), Fraction(1))
        if dv == 0:
            raise UnbalancedError("prefactor has a pole at v = w = 1")
        return r * LambdaRational.const(Fraction(nv) / dv)

    def __repr__(self):
        return f"BracketExpr({self.factors}, prefactor={self.prefactor.text()})"
