"""Independent reference computations used by the tests."""

from __future__ import annotations

from fractions import Fraction
from math import comb


def kontsevich(dmax: int) -> dict[int, int]:
    """Rational plane curve counts from the closed-form quadratic recursion."""
    n = {1: 1}
    for d in range(2, dmax + 1):
        total = 0
        for d1 in range(1, d):
            d2 = d - d1
            total += n[d1] * n[d2] * (d1 ** 2 * d2 ** 2 * comb(3 * d - 4, 3 * d1 - 2)
                                      - d1 ** 3 * d2 * comb(3 * d - 4, 3 * d1 - 1))
        n[d] = total
    return n


# Known Welschinger counts of the plane, W_d(k, l) with k + 2l = 3d - 1.
WELSCHINGER_P2 = {
    (1, 2, 0): 1, (1, 0, 1): 1,
    (2, 5, 0): 1, (2, 3, 1): 1, (2, 1, 2): 1,
    (3, 8, 0): 8, (3, 6, 1): 6, (3, 4, 2): 4, (3, 2, 3): 2, (3, 0, 4): 0,
    (4, 11, 0): 240, (4, 9, 1): 144, (4, 7, 2): 80, (4, 5, 3): 40, (4, 3, 4): 16,
    (4, 1, 5): 0,
}


def brute_r12(g, P, O2, OU, OUU, a, b):
    n = len(g)
    s = Fraction(0)
    for i in range(n):
        for j in range(n):
            s += P[a][b][i] * g[i][j] * OU[j]
    return s + O2[a][b] * OUU - OU[a] * OU[b]


def brute_rc(g, P, a, b, c, i):
    n = len(g)
    lhs = sum(P[a][b][l] * g[l][m] * P[m][c][i] for l in range(n) for m in range(n))
    rhs = sum(P[a][c][l] * g[l][m] * P[m][b][i] for l in range(n) for m in range(n))
    return Fraction(lhs) - Fraction(rhs)


def brute_m03(g, P, O2, OU, a, b, c):
    n = len(g)
    lhs = sum(P[a][b][i] * g[i][j] * O2[j][c] for i in range(n) for j in range(n))
    lhs += O2[a][b] * OU[c]
    rhs = sum(P[a][c][i] * g[i][j] * O2[j][b] for i in range(n) for j in range(n))
    rhs += O2[a][c] * OU[b]
    return Fraction(lhs) - Fraction(rhs)
