"""Slow, independent reference computations used only by the tests.

Nothing here touches the package's linear algebra: plain Python loops with
full pivoting, so a shared bug cannot hide in both paths.
"""

import math


def gauss_jordan_inverse(M):
    """Inverse by Gauss-Jordan elimination with full pivoting."""
    n = len(M)
    a = [list(map(float, row)) + [1.0 if i == j else 0.0 for j in range(n)] for i, row in enumerate(M)]
    col_perm = list(range(n))
    for c in range(n):
        best, pr, pc = -1.0, c, c
        for r in range(c, n):
            for cc in range(c, n):
                if abs(a[r][cc]) > best:
                    best, pr, pc = abs(a[r][cc]), r, cc
        if best == 0.0:
            raise ZeroDivisionError("singular matrix")
        a[c], a[pr] = a[pr], a[c]
        if pc != c:
            for row in a:
                row[c], row[pc] = row[pc], row[c]
            col_perm[c], col_perm[pc] = col_perm[pc], col_perm[c]
        piv = a[c][c]
        a[c] = [v / piv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0.0:
                f = a[r][c]
                a[r] = [v - f * w for v, w in zip(a[r], a[c])]
    # columns were swapped, so the computed inverse has its rows permuted
    inv = [[0.0] * n for _ in range(n)]
    for i in range(n):
        inv[col_perm[i]] = a[i][n:]
    return inv


def solve_full_pivot(M, b):
    inv = gauss_jordan_inverse(M)
    return [sum(inv[i][j] * b[j] for j in range(len(b))) for i in range(len(b))]


def loop_matvec(A, x):
    return [sum(A[i][j] * x[j] for j in range(len(x))) for i in range(len(A))]


def loop_matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def transpose(A):
    return [list(col) for col in zip(*A)]


def least_squares(Z, y):
    Zt = transpose(Z)
    return solve_full_pivot(loop_matmul(Zt, Z), loop_matvec(Zt, y))


def refit_scores(Z, y, z0, y0, alpha, floor=1e-6):
    """Both regressions refit from scratch on the n + 1 augmented rows."""
    Z = [list(map(float, r)) for r in Z]
    Za = Z + [list(map(float, z0))]
    ya = list(map(float, y)) + [float(y0)]
    beta = least_squares(Za, ya)
    res = [abs(t - p) for t, p in zip(ya, loop_matvec(Za, beta))]
    gamma = least_squares(Za, res)
    delta = loop_matvec(Za, gamma)
    scores = [r / max(1.0 + d, floor) for r, d in zip(res, delta)]
    n = len(Z)
    k = math.ceil(round((1 - alpha) * (n + 1), 9))
    return scores[n], sorted(scores[:n])[k - 1]


def inf_norm(A):
    return max(sum(abs(v) for v in row) for row in A)
