"""Exact integer linear algebra: column Hermite reduction and solving A x = b over Z."""

from __future__ import annotations


class NoIntegerSolution(ValueError):
    pass


def _col_op(M, a, b, p, q, r, s):
    """Replace columns (a, b) by (p col_a + q col_b, r col_a + s col_b)."""
    for row in M:
        x, y = row[a], row[b]
        row[a], row[b] = p * x + q * y, r * x + s * y


def column_echelon(A):
    """Return (H, U, pivots) with A U = H, U unimodular, H in lower column echelon form.

    ``pivots`` lists (row, column) of the leading entries; entries are Python ints.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = [[int(x) for x in row] for row in A]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    pivots = []
    col = 0
    for r in range(m):
        if col >= n:
            break
        for k in range(col + 1, n):
            # Euclid on the pair (H[r][col], H[r][k]) by unimodular column moves
            while H[r][k] != 0:
                qt = H[r][col] // H[r][k]
                _col_op(H, col, k, 0, 1, 1, -qt)
                _col_op(U, col, k, 0, 1, 1, -qt)
        if H[r][col] != 0:
            if H[r][col] < 0:
                _col_op(H, col, col, -1, 0, -1, 0)
                _col_op(U, col, col, -1, 0, -1, 0)
            pivots.append((r, col))
            col += 1
    return H, U, pivots


def solve_integer(A, b):
    """An integer solution of A x = b, or NoIntegerSolution."""
    H, U, pivots = column_echelon(A)
    n = len(U)
    y = [0] * n
    resid = [int(v) for v in b]
    for r, c in pivots:
        if resid[r] % H[r][c]:
            raise NoIntegerSolution(f"row {r} is not divisible by its pivot")
        y[c] = resid[r] // H[r][c]
        if y[c]:
            for rr in range(len(resid)):
                resid[rr] -= H[rr][c] * y[c]
    if any(resid):
        raise NoIntegerSolution("inconsistent system")
    return [sum(U[i][j] * y[j] for j in range(n)) for i in range(n)]
