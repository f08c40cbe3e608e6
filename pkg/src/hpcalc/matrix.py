"""Square matrices with entries in a graded-commutative ring.

Matrices are plain lists of rows of ``GradedElement``; column ``j`` holds the
image of the ``j``-th basis vector. Products keep entry order, so matrices of
forms multiply correctly with Koszul signs.
"""
from __future__ import annotations

from typing import Sequence

from .derham import dR
from .gca import GradedElement, RingSpec, unit_inverse

Matrix = list  # list[list[GradedElement]]


def zeros(ring: RingSpec, rows: int, cols: int | None = None) -> Matrix:
    cols = rows if cols is None else cols
    return [[ring.zero for _ in range(cols)] for _ in range(rows)]


def identity(ring: RingSpec, n: int) -> Matrix:
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def coerce(ring: RingSpec, M: Sequence[Sequence]) -> Matrix:
    return [[ring.coerce(e) for e in row] for row in M]


def shape(M: Matrix) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def matmul(M: Matrix, N: Matrix) -> Matrix:
    if shape(M)[1] != shape(N)[0]:
        raise ValueError(f"shape mismatch {shape(M)} x {shape(N)}")
    inner = range(len(N))
    out = []
    for row in M:
        out_row = []
        for j in range(len(N[0]) if N else 0):
            acc = None
            for k in inner:
                a, b = row[k], N[k][j]
                if a and b:
                    p = a * b
                    acc = p if acc is None else acc + p
            out_row.append(acc if acc is not None else row[0].ring.zero)
        out.append(out_row)
    return out


def matadd(M: Matrix, N: Matrix) -> Matrix:
    if shape(M) != shape(N):
        raise ValueError("shape mismatch")
    return [[a + b for a, b in zip(r, s)] for r, s in zip(M, N)]


def matsub(M: Matrix, N: Matrix) -> Matrix:
    return matadd(M, scale(N, -1))


def scale(M: Matrix, c) -> Matrix:
    """``c * M`` with the scalar (or ring element) on the left."""
    if isinstance(c, GradedElement):
        return [[c * a for a in row] for row in M]
    return [[a * c for a in row] for row in M]


def matpow(M: Matrix, k: int, ring: RingSpec) -> Matrix:
    out = identity(ring, len(M))
    for _ in range(k):
        out = matmul(out, M)
    return out


def trace(M: Matrix, ring: RingSpec) -> GradedElement:
    acc = ring.zero
    for i in range(len(M)):
        acc = acc + M[i][i]
    return acc


def d_entries(M: Matrix) -> Matrix:
    """Entrywise de Rham differential."""
    return [[dR(a) for a in row] for row in M]


def is_scalar(M: Matrix, c: GradedElement) -> bool:
    """``M == c * I``."""
    return all((a == c) if i == j else not a for i, row in enumerate(M) for j, a in enumerate(row))


def det(M: Matrix, ring: RingSpec) -> GradedElement:
    """Determinant by cofactor expansion (entries must be even)."""
    n = len(M)
    if n == 0:
        return ring.one

    def rec(rows: tuple[int, ...], cols: tuple[int, ...]) -> GradedElement:
        if len(rows) == 1:
            return M[rows[0]][cols[0]]
        acc = ring.zero
        r, rest = rows[0], rows[1:]
        for k, c in enumerate(cols):
            e = M[r][c]
            if not e:
                continue
            minor = rec(rest, cols[:k] + cols[k + 1:])
            term = e * minor
            acc = acc - term if k % 2 else acc + term
        return acc

    return rec(tuple(range(n)), tuple(range(n)))


def adjugate(M: Matrix, ring: RingSpec) -> Matrix:
    n = len(M)
    if n == 1:
        return [[ring.one]]
    out = zeros(ring, n)
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = det(minor, ring)
            out[j][i] = -cof if (i + j) % 2 else cof
    return out


def inverse(M: Matrix, ring: RingSpec) -> Matrix:
    """Inverse over ``ring``; the determinant must be a unit (``c * f^k``)."""
    dinv = unit_inverse(det(M, ring))
    return scale(adjugate(M, ring), dinv)


def block(top_left: Matrix, top_right: Matrix, bottom_left: Matrix, bottom_right: Matrix) -> Matrix:
    top = [a + b for a, b in zip(top_left, top_right)]
    bottom = [a + b for a, b in zip(bottom_left, bottom_right)]
    return top + bottom


def format_matrix(M: Matrix) -> str:
    return "[" + ", ".join("[" + ", ".join(str(a) for a in row) + "]" for row in M) + "]"
