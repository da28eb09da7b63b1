"""Small exact linear algebra over Q on tuples of Fractions.

Matrices are tuples of row tuples. Sizes here never exceed 8x8, so plain
Gauss-Jordan elimination is fast enough and keeps everything exact.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Matrix = tuple[tuple[Fraction, ...], ...]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def vecmat(v: Sequence, a: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """Row vector times matrix."""
    n = len(a[0])
    return tuple(sum((Fraction(v[i]) * a[i][j] for i in range(len(v))), Fraction(0)) for j in range(n))


def scale(a: Matrix, s) -> Matrix:
    s = Fraction(s)
    return tuple(tuple(x * s for x in row) for row in a)


def _eliminate(a: Matrix, rhs: Matrix | None):
    n = len(a)
    m = [list(row) + (list(rhs[i]) if rhs is not None else []) for i, row in enumerate(a)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0), None
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det *= p
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det, m


def det(a: Matrix) -> Fraction:
    return _eliminate(a, None)[0]


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    d, m = _eliminate(a, identity(n))
    if d == 0:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(row[n:]) for row in m)


def is_integral(a: Sequence[Sequence]) -> bool:
    return all(Fraction(x).denominator == 1 for row in a for x in row)


def common_denominator(a: Sequence[Sequence]) -> int:
    return lcm(1, *(Fraction(x).denominator for row in a for x in row))


def as_int_rows(a: Sequence[Sequence]) -> list[list[int]]:
    if not is_integral(a):
        raise ValueError("matrix has non-integer entries")
    return [[int(x) for x in row] for row in a]


def leading_minors_positive(a: Matrix) -> bool:
    return all(det(tuple(row[:k] for row in a[:k])) > 0 for k in range(1, len(a) + 1))
