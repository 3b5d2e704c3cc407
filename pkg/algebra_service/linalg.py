"""Exact dense linear algebra: rational solves and polynomial determinants.

Both routines use Bareiss fraction-free elimination; a zero pivot is
replaced by the first nonzero entry below it in the same column.
"""
import logging
from fractions import Fraction
from typing import List, Sequence

from .errors import DivisionFailure, SingularMatrix
from .poly import Poly, exquo

logger = logging.getLogger(__name__)

RatMatrix = List[List[Fraction]]


def as_matrix(rows) -> RatMatrix:
    matrix = [[Fraction(x) for x in row] for row in rows]
    if matrix and any(len(row) != len(matrix[0]) for row in matrix):
        raise ValueError("matrix rows have different lengths")
    return matrix


def solve_exact(matrix: Sequence[Sequence], rhs: Sequence) -> List[Fraction]:
    """Solve M x = rhs exactly over Q; raises SingularMatrix."""
    n = len(matrix)
    a = as_matrix(matrix)
    if any(len(row) != n for row in a) or len(rhs) != n:
        raise ValueError("solve_exact needs a square matrix and a matching right-hand side")
    for row, value in zip(a, rhs):
        row.append(Fraction(value))

    previous = Fraction(1)
    for k in range(n):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    break
            else:
                raise SingularMatrix(f"no pivot in column {k}")
        pivot = a[k][k]
        for i in range(k + 1, n):
            factor = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (pivot * row_i[j] - factor * row_k[j]) / previous
            row_i[k] = Fraction(0)
        previous = pivot

    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        acc = a[i][n] - sum(a[i][j] * x[j] for j in range(i + 1, n))
        x[i] = acc / a[i][i]
    return x


def det_exact(matrix: Sequence[Sequence]) -> Poly:
    """Determinant of a square matrix of polynomials (or scalars)."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("det_exact needs a square matrix")
    if n == 0:
        return Poly.const(1)

    names = []
    for row in matrix:
        for entry in row:
            if isinstance(entry, Poly):
                names.extend(v for v in entry.gens if v not in names)
    gens = tuple(names)
    m = [[entry.reorder(gens) if isinstance(entry, Poly) else Poly.const(entry, gens) for entry in row]
         for row in matrix]

    sign = 1
    previous = Poly.const(1, gens)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Poly.zero(gens)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                entry = pivot * m[i][j] - m[i][k] * m[k][j]
                try:
                    m[i][j] = exquo(entry, previous)
                except DivisionFailure as exc:
                    raise DivisionFailure(f"inexact Bareiss step at ({i}, {j})") from exc
            m[i][k] = Poly.zero(gens)
        previous = pivot
    return m[n - 1][n - 1] * sign
