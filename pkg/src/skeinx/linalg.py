"""Small exact linear algebra helpers over Fraction-like scalars and
RationalFn entries.  Everything is plain Gaussian elimination; matrices here
are at most 80 x 80.
"""

from __future__ import annotations

from fractions import Fraction

from .ringcore import RationalFn


def transpose(m):
    return [list(row) for row in zip(*m)]


def identity(k):
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    bt = list(zip(*b))
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            bj = bt[j]
            s = ai[0] * bj[0]
            for t in range(1, k):
                s = s + ai[t] * bj[t]
            row.append(s)
        out.append(row)
    return out


def matvec(a, v):
    return [sum((row[i] * v[i] for i in range(1, len(v))), row[0] * v[0])
            for row in a]


def _gauss(mat, rhs, zero_test):
    n = len(mat)
    m = [row[:] for row in mat]
    r = [row[:] for row in rhs]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if not zero_test(m[i][col]):
                piv = i
                break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        r[col], r[piv] = r[piv], r[col]
        inv = _inv_scalar(m[col][col])
        m[col] = [x * inv for x in m[col]]
        r[col] = [x * inv for x in r[col]]
        for i in range(n):
            if i != col and not zero_test(m[i][col]):
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
                r[i] = [a - f * b for a, b in zip(r[i], r[col])]
    return r


def _inv_scalar(x):
    if isinstance(x, RationalFn):
        return x.inv()
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def inverse_fraction(mat):
    n = len(mat)
    return _gauss(mat, identity(n), lambda x: x == 0)


def inverse_rational(mat):
    """Inverse of a RationalFn matrix via the adjugate with Bareiss minors.

    With C = diag(rowdens) * M the cleared polynomial matrix,
    M^-1 = adj(C) diag(rowdens) / det(C).
    """
    n = len(mat)
    polys, rowdens = _clear_rows(mat)
    det = det_poly_bareiss(polys)
    if det.is_zero():
        raise ZeroDivisionError("singular matrix")
    detr = RationalFn.from_poly(det)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        di = RationalFn.from_poly(rowdens[i])
        for j in range(n):
            if n == 1:
                val = RationalFn.one()
            else:
                minor = [[polys[r][c] for c in range(n) if c != j]
                         for r in range(n) if r != i]
                val = RationalFn.from_poly(det_poly_bareiss(minor))
            if (i + j) % 2:
                val = -val
            out[j][i] = val * di / detr
    return out


def det_fraction(mat):
    n = len(mat)
    m = [row[:] for row in mat]
    det = 1
    for col in range(n):
        piv = None
        for i in range(col, n):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = _inv_scalar(m[col][col])
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return Fraction(det)


def _den_factorization(den):
    """Factor a denominator over the ring's factor library; returns
    (factor multiset dict, leftover poly)."""
    from .ringcore.rational import factor_library
    facs = {}
    leftover = den
    for phi in factor_library():
        while True:
            try:
                leftover = leftover.divexact(phi)
            except ValueError:
                break
            facs[phi] = facs.get(phi, 0) + 1
        if leftover.is_one() or leftover.is_monomial():
            break
    return facs, leftover


def _clear_rows(mat):
    """Multiply each row by the lcm of its denominators; returns
    (LaurentPoly matrix, list of row clearing polynomials)."""
    from .ringcore.laurent import LaurentPoly
    out = []
    rowdens = []
    for row in mat:
        lcm_facs = {}
        lcm_extra = LaurentPoly.one()
        dens = []
        for e in row:
            facs, left = _den_factorization(e.den)
            dens.append((e.den, facs, left))
            for phi, m in facs.items():
                if lcm_facs.get(phi, 0) < m:
                    lcm_facs[phi] = m
            if not (left.is_one() or left.is_monomial()):
                lcm_extra = lcm_extra * left  # rare; safe overestimate
        rd = lcm_extra
        for phi, m in lcm_facs.items():
            for _ in range(m):
                rd = rd * phi
        rowpolys = []
        for e in row:
            if e.den.is_one():
                rowpolys.append(e.num * rd)
            else:
                rowpolys.append(e.num * rd.divexact(e.den))
        rowdens.append(rd)
        out.append(rowpolys)
    return out, rowdens


def det_poly_bareiss(m):
    """Fraction-free determinant of a LaurentPoly matrix."""
    from .ringcore.laurent import LaurentPoly
    n = len(m)
    m = [row[:] for row in m]
    sign = 1
    prev = LaurentPoly.one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if piv is None:
                return LaurentPoly.zero()
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.divexact(prev)
            m[i][k] = LaurentPoly.zero()
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def det_rational(mat):
    """Determinant of a RationalFn matrix via row clearing and Bareiss."""
    if not mat:
        return RationalFn.one()
    polys, rowdens = _clear_rows(mat)
    det = RationalFn.from_poly(det_poly_bareiss(polys))
    for rd in rowdens:
        det = det / RationalFn.from_poly(rd)
    return det


def rank_fraction(mat):
    if not mat:
        return 0
    m = [ [Fraction(x) for x in row] for row in mat]
    rows = len(m)
    cols = len(m[0])
    r = 0
    for col in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def nullspace_fraction(mat):
    """Basis of the kernel, exact, over Fraction entries."""
    if not mat:
        return []
    rows = len(mat)
    cols = len(mat[0])
    m = [[Fraction(x) for x in row] for row in mat]
    pivots = []
    r = 0
    for col in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis
