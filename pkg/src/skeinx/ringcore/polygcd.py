"""GCD of integer polynomials in one and two variables.

Used to keep rational functions reduced.  The bivariate gcd treats a
polynomial as a polynomial in w whose coefficients live in Z[v] and runs a
primitive polynomial-remainder sequence at both levels.  Inputs here are
ordinary (non-Laurent) polynomials; Laurent monomial units are stripped by the
caller.
"""

from __future__ import annotations

from math import gcd as igcd

# ---------------------------------------------------------------- univariate
# dense lists of ints, index = exponent, no trailing zeros


def _utrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def uadd(a, b):
    n = max(len(a), len(b))
    return _utrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def uneg(a):
    return [-x for x in a]


def umul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _utrim(out)


def uscale(a, c):
    return [x * c for x in a] if c else []


def ucontent(a):
    g = 0
    for x in a:
        g = igcd(g, x)
        if g == 1:
            return 1
    return g


def uprimitive(a):
    if not a:
        return []
    g = ucontent(a)
    if a[-1] < 0:
        g = -g
    return [x // g for x in a] if g != 1 else list(a)


def udivexact(a, b):
    """Exact division in Z[x]; raises ValueError if not exact."""
    if not b:
        raise ZeroDivisionError
    if not a:
        return []
    rem = list(a)
    q = [0] * (len(a) - len(b) + 1)
    lc = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = rem[k + len(b) - 1]
        if c % lc:
            raise ValueError("inexact univariate division")
        qc = c // lc
        q[k] = qc
        if qc:
            for j, y in enumerate(b):
                rem[k + j] -= qc * y
    if any(rem):
        raise ValueError("inexact univariate division")
    return _utrim(q)


def _uprem(a, b):
    """Pseudo-remainder of a by b in Z[x]: repeat rem := lc(b)*rem - lc(rem)*x^k*b."""
    rem = list(a)
    db = len(b) - 1
    lcb = b[-1]
    while rem and len(rem) - 1 >= db:
        k = len(rem) - 1 - db
        lcr = rem[-1]
        rem = uscale(rem, lcb)
        for j, y in enumerate(b):
            rem[k + j] -= lcr * y
        _utrim(rem)
    return rem


def ugcd(a, b):
    """GCD in Z[x], positive leading coefficient and primitive up to content."""
    a = _utrim(list(a))
    b = _utrim(list(b))
    if not a:
        return uprimitive(b) if b else []
    if not b:
        return uprimitive(a)
    ca, cb = abs(ucontent(a)), abs(ucontent(b))
    c = igcd(ca, cb)
    a = uprimitive(a)
    b = uprimitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _uprem(a, b)
        a, b = b, uprimitive(r)
    g = uscale(a, c) if c != 1 else a
    return g if g[-1] > 0 else uneg(g)


# ---------------------------------------------------------------- bivariate
# representation: list over w-exponent of univariate Z[v] polys


def _btrim(a):
    while a and not a[-1]:
        a.pop()
    return a


def bcontent(a):
    """GCD in Z[v] of all w-coefficients."""
    g = []
    for c in a:
        if c:
            g = ugcd(g, c)
            if g == [1]:
                return g
    return g


def bprimitive(a):
    if not a:
        return []
    g = bcontent(a)
    if g == [1]:
        return [list(c) for c in a]
    return [udivexact(c, g) if c else [] for c in a]


def _bprem(a, b):
    """Pseudo-remainder in (Z[v])[w]: repeat rem := lc(b)*rem - lc(rem)*w^k*b."""
    rem = [list(c) for c in a]
    db = len(b) - 1
    lcb = b[-1]
    while rem and len(rem) - 1 >= db:
        k = len(rem) - 1 - db
        lcr = rem[-1]
        rem = [umul(c, lcb) if c else [] for c in rem]
        for j, y in enumerate(b):
            if y:
                rem[k + j] = uadd(rem[k + j], uneg(umul(lcr, y)))
        _btrim(rem)
    return rem


def bgcd(a, b):
    """GCD in Z[v][w] up to sign, computed by a primitive PRS."""
    a = _btrim([list(c) for c in a])
    b = _btrim([list(c) for c in b])
    if not a:
        return b
    if not b:
        return a
    ca, cb = bcontent(a), bcontent(b)
    c = ugcd(ca, cb)
    a = bprimitive(a)
    b = bprimitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _bprem(a, b)
        a, b = b, bprimitive(r)
    if c != [1]:
        a = [umul(x, c) if x else [] for x in a]
    return a
