"""Exact linear algebra over rational scalars.

Small dense routines on fractions.Fraction entries: reduced row echelon
form, rank, nullspace, inversion, span membership.  Everything works on
lists of lists or object-dtype numpy arrays and stays exact.  Floating
counterparts (SVD-based rank and nullspace with a relative threshold)
live here as well so callers can dispatch on scalar policy.
"""

from fractions import Fraction

import numpy as np

FLOAT_RANK_TOL = 1e-10


def _to_rows(mat):
    return [[Fraction(x) for x in row] for row in mat]


def rref(mat):
    """Reduced row echelon form.

    Returns (rows, pivot_columns) with rows a list of Fraction lists.
    """
    rows = _to_rows(mat)
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rank(mat):
    return len(rref(mat)[1])


def nullspace(mat):
    """Basis of the right kernel, as a list of Fraction vectors."""
    rows, pivots = rref(mat)
    ncols = len(rows[0]) if rows else 0
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def invert(mat):
    """Exact inverse, or None when the matrix is singular."""
    rows = _to_rows(mat)
    d = len(rows)
    aug = [row + [Fraction(1 if i == j else 0) for j in range(d)]
           for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots[:d] != list(range(d)):
        return None
    return [row[d:] for row in red]


def in_row_span(basis_rows, vector):
    """Exact membership of vector in the row span of basis_rows."""
    if not basis_rows:
        return all(Fraction(x) == 0 for x in vector)
    stacked = [list(r) for r in basis_rows] + [list(vector)]
    return rank(stacked) == rank(basis_rows)


def row_space_basis(mat):
    """Canonical (RREF) basis of the row space, zero rows dropped."""
    rows, pivots = rref(mat)
    return [rows[i] for i in range(len(pivots))]


def column_space_basis(mat):
    """Canonical basis of the column space, as row vectors."""
    transposed = [list(col) for col in zip(*_to_rows(mat))]
    return row_space_basis(transposed)


def completion_columns(basis_rows, dim):
    """Indices of standard basis vectors completing basis_rows to dim."""
    current = [list(r) for r in basis_rows]
    added = []
    for j in range(dim):
        e = [Fraction(1 if i == j else 0) for i in range(dim)]
        if not in_row_span(current, e):
            current.append(e)
            added.append(j)
        if len(current) == dim:
            break
    return added


def rational_root(value, degree):
    """Exact degree-th root of a nonnegative Fraction, or None.

    Used for scalars like |det A|^(1/d): the root is returned only when
    it is itself rational.
    """
    value = Fraction(value)
    if value < 0:
        return None
    if value == 0:
        return Fraction(0)
    num = _int_nth_root(value.numerator, degree)
    den = _int_nth_root(value.denominator, degree)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_nth_root(n, k):
    if n == 0:
        return 0
    guess = round(n ** (1.0 / k))
    for candidate in (guess - 1, guess, guess + 1):
        if candidate >= 0 and candidate ** k == n:
            return candidate
    return None


# floating-point counterparts


def rank_f(mat, tol=FLOAT_RANK_TOL):
    mat = np.asarray(mat, dtype=float)
    if mat.size == 0:
        return 0
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def nullspace_f(mat, tol=FLOAT_RANK_TOL):
    mat = np.asarray(mat, dtype=float)
    _, sv, vt = np.linalg.svd(mat)
    cutoff = tol * (sv[0] if sv.size else 0.0)
    null_mask = np.zeros(vt.shape[0], dtype=bool)
    null_mask[: sv.size] = sv <= cutoff
    null_mask[sv.size:] = True
    return [vt[i] for i in range(vt.shape[0]) if null_mask[i]]


def in_row_span_f(basis_rows, vector, tol=FLOAT_RANK_TOL):
    if len(basis_rows) == 0:
        return bool(np.linalg.norm(np.asarray(vector, dtype=float)) <= tol)
    basis = np.asarray(basis_rows, dtype=float)
    v = np.asarray(vector, dtype=float)
    # least-squares projection residual relative to the vector scale
    coeffs, *_ = np.linalg.lstsq(basis.T, v, rcond=None)
    residual = np.linalg.norm(basis.T @ coeffs - v)
    scale = max(np.linalg.norm(v), 1.0)
    return bool(residual <= tol * scale)
