"""Exact rational linear algebra: fraction-free determinants and interpolation."""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction


def bareiss_det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by Bareiss elimination with row pivoting on zero pivots."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant needs a square matrix")
    a = [[Fraction(x) for x in row] for row in matrix]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return Fraction(0)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients (lowest degree first) of the polynomial through (xs, ys)."""
    n = len(xs)
    if n != len(ys) or len(set(xs)) != n:
        raise ValueError("interpolation needs distinct abscissae, one value each")
    # Newton divided differences
    coef = [Fraction(y) for y in ys]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level])
    poly = [Fraction(0)] * n
    poly[0] = coef[n - 1]
    for i in range(n - 2, -1, -1):
        # poly <- poly * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [shifted[d] - xs[i] * poly[d] for d in range(n)]
        poly[0] += coef[i]
    return poly


def polyval(coefficients: Sequence[Fraction], x: Fraction) -> Fraction:
    """Horner evaluation, lowest degree first."""
    acc = Fraction(0)
    for c in reversed(coefficients):
        acc = acc * x + c
    return acc
