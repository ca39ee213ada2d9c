"""Exact linear algebra over rationals: elimination, nullspaces, affine tools."""

from __future__ import annotations

from fractions import Fraction


def rref(matrix: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the list of pivot columns (in-place copy)."""
    m = [row[:] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [v / inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(matrix: list[list[Fraction]]) -> int:
    return len(rref(matrix)[1])


def nullspace_vector(matrix: list[list[Fraction]]) -> list[Fraction] | None:
    """First nonzero kernel vector of the column system, or None if full column rank.

    Deterministic: the free column of lowest index is set to 1.
    """
    if not matrix or not matrix[0]:
        return None
    cols = len(matrix[0])
    red, pivots = rref(matrix)
    free = [c for c in range(cols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    v = [Fraction(0)] * cols
    v[f] = Fraction(1)
    for r, c in enumerate(pivots):
        v[c] = -red[r][f]
    return v


def solve(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """One exact solution of matrix @ x = rhs, or None if inconsistent."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [list(matrix[i]) + [rhs[i]] for i in range(rows)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = red[r][-1]
    return x


def affine_dependency(points: list[tuple]) -> list[Fraction] | None:
    """Coefficients c (not all zero) with sum c_i = 0 and sum c_i p_i = 0,
    or None when the points are affinely independent."""
    if len(points) <= 1:
        return None
    dim = len(points[0])
    columns = [[Fraction(1)] * len(points)]
    for d in range(dim):
        columns.append([Fraction(p[d]) for p in points])
    return nullspace_vector(columns)


def affine_dimension_of(points: list[tuple]) -> int:
    """Affine dimension of a finite point set (-1 for the empty set)."""
    if not points:
        return -1
    base = points[0]
    diffs = [[Fraction(p[d]) - Fraction(base[d]) for d in range(len(base))] for p in points[1:]]
    if not diffs:
        return 0
    return rank(diffs)


def invert(matrix: list[list[Fraction]]) -> list[list[Fraction]] | None:
    """Exact inverse of a square matrix, or None if singular."""
    n = len(matrix)
    aug = [list(matrix[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]
