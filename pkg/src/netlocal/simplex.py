"""Exact rational linear feasibility via phase-1 simplex with Bland's rule.

Decides whether A x = b has a solution with x >= 0.  On success returns the
basic feasible point; on failure returns a Farkas certificate y with
y^T A <= 0 componentwise and y^T b > 0.  All arithmetic is over Fraction, so
the answer is never wrong by rounding; Bland's rule guarantees termination.
"""

from __future__ import annotations

from fractions import Fraction


def feasible_point(
    matrix: list[list[Fraction]], rhs: list[Fraction]
) -> tuple[str, list[Fraction]]:
    """Solve {x >= 0 : matrix @ x = rhs}.

    Returns ("feasible", x) or ("infeasible", y) with y the Farkas witness.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    A = [[Fraction(v) for v in row] for row in matrix]
    b = [Fraction(v) for v in rhs]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]

    # tableau over structural columns + artificial identity, objective = sum
    # of artificials; basis starts on the artificials
    T = [A[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    cost = [Fraction(0)] * n + [Fraction(1)] * m
    # reduced-cost row z_j - c_j for the starting basis
    z = [sum(T[i][j] for i in range(m)) - cost[j] for j in range(n + m)]
    obj = sum(b)

    while True:
        entering = next((j for j in range(n + m) if z[j] > 0), None)
        if entering is None:
            break
        # Bland: smallest ratio, ties by smallest basis variable index
        leaving = None
        best = None
        for i in range(m):
            if T[i][entering] > 0:
                ratio = T[i][-1] / T[i][entering]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best = ratio
                    leaving = i
        if leaving is None:
            raise AssertionError("phase-1 objective is bounded below by zero")
        piv = T[leaving][entering]
        T[leaving] = [v / piv for v in T[leaving]]
        for i in range(m):
            if i != leaving and T[i][entering] != 0:
                f = T[i][entering]
                T[i] = [a - f * p for a, p in zip(T[i], T[leaving])]
        f = z[entering]
        z = [a - f * p for a, p in zip(z, T[leaving][:-1])]
        obj -= f * T[leaving][-1]
        basis[leaving] = entering

    if obj == 0:
        x = [Fraction(0)] * n
        for i, v in enumerate(basis):
            if v < n:
                x[v] = T[i][-1]
        return "feasible", x

    # infeasible: simplex multipliers y solve y^T = c_B^T B^{-1}; with the
    # artificial columns holding B^{-1}, y_i = (reduced cost of artificial i) + c_i
    y = [z[n + i] + 1 for i in range(m)]
    # undo the row sign flips applied to reach b >= 0
    for i in range(m):
        if rhs[i] < 0:
            y[i] = -y[i]
    assert sum(yi * vi for yi, vi in zip(y, rhs)) > 0
    for j in range(n):
        assert sum(y[i] * matrix[i][j] for i in range(m)) <= 0
    return "infeasible", y
