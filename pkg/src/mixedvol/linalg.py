"""Exact linear algebra over rationals and integer lattices.

Everything here is deterministic and allocation-light; matrices are plain
lists of tuples/lists of Fraction (or int, which Fraction arithmetic
absorbs).  Sizes are desk scale (n <= 6), so classic Gaussian elimination
is the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_scale(a, s):
    return tuple(x * s for x in a)


def vec_dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def matrix_rank(rows):
    """Rank of a rational matrix (list of row sequences)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((i for i in range(row, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = 1 / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[row])]
        rank += 1
        row += 1
        if row == len(m):
            break
    return rank


def affine_rank(points):
    """Dimension of the affine hull of a nonempty point set (0 for one point)."""
    if not points:
        raise ValueError("empty point set")
    base = points[0]
    return matrix_rank([vec_sub(p, base) for p in points[1:]])


def solve_square(rows, rhs):
    """Solve a square rational system exactly; raises on singularity."""
    n = len(rows)
    m = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(rows, rhs)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot is None:
            raise ValueError("singular system")
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return tuple(m[i][n] for i in range(n))


def solve_consistent(rows, rhs):
    """Solve A x = b for one exact solution of a consistent (possibly
    rectangular) system; returns None if inconsistent."""
    if not rows:
        return ()
    ncols = len(rows[0])
    m = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(ncols):
        pivot = next((i for i in range(row, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = 1 / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    for i in range(row, len(m)):
        if m[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        x[col] = m[r][ncols]
    return tuple(x)


def nullspace(rows, ncols):
    """Basis of the rational nullspace of A (rows of length ncols)."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    row = 0
    for col in range(ncols):
        pivot = next((i for i in range(row, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = 1 / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(tuple(v))
    return basis


def det(rows):
    """Exact determinant of a square rational matrix."""
    n = len(rows)
    m = [list(map(Fraction, r)) for r in rows]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        result *= m[col][col]
        inv = 1 / m[col][col]
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return sign * result


def int_det(rows):
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row = a[i]
            krow = a[k]
            for j in range(k + 1, n):
                row[j] = (row[j] * akk - aik * krow[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def primitive_vector(v):
    """Scale a rational vector to coprime integers, preserving direction.

    Sign is preserved (not canonicalized); the zero vector is rejected.
    """
    v = [Fraction(x) for x in v]
    if all(x == 0 for x in v):
        raise ValueError("zero vector has no primitive form")
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


def scale_to_integers(values):
    """Common integer scaling: returns (ints, multiplier) with ints = values * multiplier."""
    fracs = [Fraction(x) for x in values]
    den = 1
    for x in fracs:
        den = den * x.denominator // gcd(den, x.denominator)
    return [int(x * den) for x in fracs], den

def hnf_basis(int_rows):
    """Row basis (echelon form over Z) of the lattice generated by int_rows.

    Row swaps, negations, and integer row subtractions are unimodular, so the
    returned rows generate exactly the input lattice.  All-zero input gives [].
    """
    rows = [list(r) for r in int_rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        if r == len(rows):
            break
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][col] != 0]
            if not nz:
                break
            imin = min(nz, key=lambda i: abs(rows[i][col]))
            rows[r], rows[imin] = rows[imin], rows[r]
            pivot = rows[r]
            done = True
            for i in range(r + 1, len(rows)):
                if rows[i][col] != 0:
                    q = rows[i][col] // pivot[col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], pivot)]
                    if rows[i][col] != 0:
                        done = False
            if done:
                if pivot[col] < 0:
                    rows[r] = [-x for x in pivot]
                r += 1
                break
    return [tuple(row) for row in rows[:r]]
