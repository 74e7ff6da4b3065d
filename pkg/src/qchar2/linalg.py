"""Small exact linear algebra over tower elements.

Matrices are lists of row lists of FieldElement.  Everything here is
plain Gaussian elimination with exact division; sizes stay tiny (the
square-coordinate space has dimension 2^m <= 4 on supported towers).
"""

from __future__ import annotations

from .errors import ZeroInput
from .fields import FieldElement, FieldTower


def rank_profile(tw: FieldTower, rows):
    """Row-reduce a copy of `rows`; return (rank, pivot column indices)."""
    mat = [list(r) for r in rows]
    n_rows = len(mat)
    n_cols = len(mat[0]) if mat else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if not mat[i][c].is_zero()), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = mat[r][c].inverse()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(n_rows):
            if i != r and not mat[i][c].is_zero():
                f = mat[i][c]
                mat[i] = [x + f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return r, pivots


def kernel_vector(tw: FieldTower, rows):
    """A nonzero vector v with M v = 0 (columns = unknowns), or None."""
    mat = [list(r) for r in rows]
    n_cols = len(mat[0]) if mat else 0
    _, pivots = rank_profile(tw, mat)
    free = [c for c in range(n_cols) if c not in pivots]
    if not free:
        return None
    target = free[0]
    # re-reduce and back-substitute with the free variable set to 1
    mat = [list(r) for r in rows]
    reduced = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(mat)) if not mat[i][c].is_zero()), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = mat[r][c].inverse()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][c].is_zero():
                f = mat[i][c]
                mat[i] = [x + f * y for x, y in zip(mat[i], mat[r])]
        reduced.append((c, r))
        r += 1
    v = [tw.zero()] * n_cols
    v[target] = tw.one()
    for c, row_idx in reduced:
        v[c] = mat[row_idx][target]
    return v


def kernel_basis(tw: FieldTower, rows):
    """Basis of {v : M v = 0}, in free-column order."""
    mat = [list(r) for r in rows]
    n_cols = len(mat[0]) if mat else 0
    reduced = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(mat)) if not mat[i][c].is_zero()), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = mat[r][c].inverse()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][c].is_zero():
                f = mat[i][c]
                mat[i] = [x + f * y for x, y in zip(mat[i], mat[r])]
        reduced.append((c, r))
        r += 1
    pivot_cols = {c for c, _ in reduced}
    basis = []
    for free in range(n_cols):
        if free in pivot_cols:
            continue
        v = [tw.zero()] * n_cols
        v[free] = tw.one()
        for c, row_idx in reduced:
            v[c] = mat[row_idx][free]
        basis.append(v)
    return basis


def solve(tw: FieldTower, rows, rhs):
    """Solve M x = rhs exactly; returns x or None when inconsistent."""
    mat = [list(r) + [b] for r, b in zip(rows, rhs)]
    n_cols = len(rows[0]) if rows else 0
    reduced = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(mat)) if not mat[i][c].is_zero()), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = mat[r][c].inverse()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][c].is_zero():
                f = mat[i][c]
                mat[i] = [x + f * y for x, y in zip(mat[i], mat[r])]
        reduced.append((c, r))
        r += 1
    for i in range(r, len(mat)):
        if not mat[i][n_cols].is_zero():
            return None
    x = [tw.zero()] * n_cols
    for c, row_idx in reduced:
        x[c] = mat[row_idx][n_cols]
    return x


# -- coordinates over the square subfield ------------------------------------------
#
# F has basis {prod_{i in S} t_i : S subset {1..m}} over F^2, so every x
# decomposes uniquely as sum_S u_S^2 * m_S.  F^2-linear questions about
# elements become F-linear questions about their coordinate vectors.


def square_coordinates(x: FieldElement) -> dict:
    """Map frozenset(S) -> u_S with x = sum u_S^2 * prod_{i in S} t_i."""
    tw = x.tower
    if x.is_zero():
        return {}
    if x.level == 0:
        return {frozenset(): x.sqrt()}
    level = x.level
    den = FieldElement._fraction(tw, level, x._den_tuple(), (tw.one(),))
    prod = den * x * den  # x = prod / den^2
    out = {}
    num = prod._num_tuple() if prod.level == level else (prod,)
    for i, c in enumerate(num):
        if c.is_zero():
            continue
        half, parity = divmod(i, 2)
        tpow = tw.monomial(level, half)
        for key, u in square_coordinates(c).items():
            if parity:
                key = key | {level}
            acc = out.get(key, tw.zero()) + u * tpow
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
    inv_den = den.inverse()
    return {k: u * inv_den for k, u in out.items()}


def square_dependence(tw: FieldTower, elements):
    """Coefficients (x_i), not all zero, with sum x_i^2 * c_i = 0, or None.

    Decides F^2-linear dependence of the c_i in the complete tower; the
    returned coefficients are exact.
    """
    if any(c.is_zero() for c in elements):
        raise ZeroInput("square dependence of a zero entry")
    coords = [square_coordinates(c) for c in elements]
    keys = sorted({k for d in coords for k in d}, key=sorted)
    rows = [[d.get(k, tw.zero()) for d in coords] for k in keys]
    if not rows:
        return None
    return kernel_vector(tw, rows)


def square_span_rank(tw: FieldTower, elements) -> tuple[int, list[int]]:
    """Rank and pivot indices of the elements inside F as an F^2-space."""
    coords = [square_coordinates(c) for c in elements]
    keys = sorted({k for d in coords for k in d}, key=sorted)
    rows = [[d.get(k, tw.zero()) for d in coords] for k in keys]
    if not rows:
        return 0, []
    return rank_profile(tw, rows)
