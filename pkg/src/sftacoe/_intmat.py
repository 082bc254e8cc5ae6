"""Small exact integer matrix helpers (lists of lists of Python ints)."""

from __future__ import annotations

from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return [[int(v) for v in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matpow(a: Sequence[Sequence[int]], k: int) -> Matrix:
    result = identity(len(a))
    base = as_matrix(a)
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def trace(a: Sequence[Sequence[int]]) -> int:
    return sum(a[i][i] for i in range(len(a)))


def sub(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def det(a: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    m = as_matrix(a)
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank(a: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals, by fraction-free elimination."""
    m = as_matrix(a)
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            if m[i][c]:
                f, g = m[r][c], m[i][c]
                m[i] = [f * x - g * y for x, y in zip(m[i], m[r])]
                row_gcd = 0
                for v in m[i]:
                    row_gcd = gcd(row_gcd, v)
                if row_gcd > 1:
                    m[i] = [v // row_gcd for v in m[i]]
        r += 1
        if r == rows:
            break
    return r
