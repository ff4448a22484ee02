"""Fraction-free elimination: determinants, ranks and Sylvester resultants."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .algebra import MultiPoly, RatFunc
from .laurent import LaurentPoly


def _exact_div(a, b):
    if isinstance(a, MultiPoly):
        return a.exquo(b)
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            return Fraction(a, b)
        return q
    return a / b


def bareiss_det(matrix: Sequence[Sequence]):
    """Determinant by Bareiss elimination with row pivoting on exact entries."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0 * m[0][0]
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _exact_div(m[i][j] * pivot - m[i][k] * m[k][j], prev)
            m[i][k] = 0 * pivot
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def matrix_rank(matrix: Sequence[Sequence]) -> int:
    """Rank of a rational matrix via integer fraction-free elimination."""
    rows = []
    for row in matrix:
        row = [Fraction(x) for x in row]
        scale = lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * scale) for x in row])
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot_row = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pivot = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            factor = rows[i][col]
            rows[i] = [(rows[i][j] * pivot - factor * rows[rank][j]) // prev for j in range(ncols)]
        prev = pivot
        rank += 1
        if rank == len(rows):
            break
    return rank


def nullspace_dim(matrix: Sequence[Sequence], ncols: int) -> int:
    return ncols - (matrix_rank(matrix) if matrix else 0)


def _coefficient_list(p, var: str | None) -> list:
    """Coefficients from the highest power down, leading zeros dropped."""
    if isinstance(p, LaurentPoly):
        if p.is_zero():
            return []
        if p.min_power() < 0:
            raise ValueError("resultant needs a polynomial in lambda (no negative powers)")
        return [p.coeff(i) for i in range(p.max_power(), -1, -1)]
    if isinstance(p, (MultiPoly, RatFunc)):
        if var is None:
            raise ValueError("name the elimination variable for polynomial inputs")
        num = p if isinstance(p, MultiPoly) else p.num
        groups = num.coefficients_in(var)
        if not groups:
            return []
        den = 1 if isinstance(p, MultiPoly) else p.den
        top = max(groups)
        zero = num * 0
        return [groups.get(i, zero) / den if den != 1 else groups.get(i, zero) for i in range(top, -1, -1)]
    raise TypeError(f"unsupported resultant argument {p!r}")


def sylvester_matrix(p_coeffs: list, q_coeffs: list) -> list[list]:
    m, n = len(p_coeffs) - 1, len(q_coeffs) - 1
    size = m + n
    zero = 0 * p_coeffs[0]
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(p_coeffs) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(q_coeffs) + [zero] * (size - n - 1 - i))
    return rows


def resultant(p, q, var: str | None = None):
    """Sylvester resultant of p and q with respect to lambda (or var)."""
    pc = _coefficient_list(p, var)
    qc = _coefficient_list(q, var)
    if not pc and not qc:
        raise ValueError("resultant of two zero polynomials")
    if not pc or not qc:
        return 0
    m, n = len(pc) - 1, len(qc) - 1
    if m == 0:
        return pc[0] ** n
    if n == 0:
        return qc[0] ** m
    return bareiss_det(sylvester_matrix(pc, qc))
