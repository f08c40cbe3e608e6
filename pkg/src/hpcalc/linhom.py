"""Exact linear algebra over Q and homology of finite complexes.

Used for degree-truncated Koszul homology: when ``f_1..f_c`` is a regular
sequence, the truncated Koszul complex has homology only in position 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Sequence

from .gca import GradedElement

__all__ = [
    "RationalMatrix",
    "kernel_basis",
    "rank",
    "FiniteComplex",
    "homology_dims",
    "monomials_up_to",
    "truncated_koszul_complex",
    "truncated_koszul_homology",
]


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples of Fraction

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> RationalMatrix:
        rows = [tuple(Fraction(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def zero(cls, rows: int, cols: int) -> RationalMatrix:
        return cls(rows, cols, tuple((Fraction(0),) * cols for _ in range(rows)))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols_t = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols_t) for r in self.entries)
        return RationalMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not any(x for r in self.entries for x in r)


def _as_matrix(M) -> RationalMatrix:
    return M if isinstance(M, RationalMatrix) else RationalMatrix.from_rows(M)


def _echelon(M: RationalMatrix) -> tuple[list[list[int]], list[int]]:
    """Fraction-free (Bareiss) row echelon form of the integer-scaled rows."""
    rows = []
    for r in M.entries:
        den = lcm(*(x.denominator for x in r)) if r else 1
        rows.append([int(x * den) for x in r])
    pivots: list[int] = []
    prev = 1
    k = 0
    for col in range(M.cols):
        if k == len(rows):
            break
        p = next((i for i in range(k, len(rows)) if rows[i][col]), None)
        if p is None:
            continue
        rows[k], rows[p] = rows[p], rows[k]
        piv = rows[k][col]
        for i in range(k + 1, len(rows)):
            a = rows[i][col]
            row = rows[i]
            for j in range(col + 1, M.cols):
                num = piv * row[j] - a * rows[k][j]
                q, rem = divmod(num, prev)
                assert not rem, "Bareiss division must be exact"
                row[j] = q
            row[col] = 0
        # rows above k keep their scale, rows below are now scaled minors
        prev = piv
        pivots.append(col)
        k += 1
    return rows[:k], pivots


def rank(M) -> int:
    return len(_echelon(_as_matrix(M))[1])


def kernel_basis(M) -> list[tuple[Fraction, ...]]:
    """Exact basis of ``{v : M v = 0}``, one vector per free column."""
    M = _as_matrix(M)
    U, pivots = _echelon(M)
    free = [j for j in range(M.cols) if j not in set(pivots)]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * M.cols
        x[fcol] = Fraction(1)
        for i in range(len(pivots) - 1, -1, -1):
            p = pivots[i]
            acc = sum((U[i][j] * x[j] for j in range(p + 1, M.cols) if U[i][j]), Fraction(0))
            x[p] = -acc / U[i][p]
        basis.append(tuple(x))
    return basis


@dataclass(frozen=True)
class FiniteComplex:
    """``V_start -> V_(start+1) -> ...`` with ``diffs[i]: V_i -> V_(i+1)``."""

    dims: tuple
    diffs: tuple
    start: int = 0

    def __post_init__(self):
        if len(self.diffs) != max(len(self.dims) - 1, 0):
            raise ValueError("need one differential between consecutive spaces")
        for i, d in enumerate(self.diffs):
            if (d.rows, d.cols) != (self.dims[i + 1], self.dims[i]):
                raise ValueError(f"differential {i} has shape {(d.rows, d.cols)}")

    def check(self) -> bool:
        return all((self.diffs[i + 1] @ self.diffs[i]).is_zero() for i in range(len(self.diffs) - 1))

    def positions(self) -> list[int]:
        return list(range(self.start, self.start + len(self.dims)))


def homology_dims(C: FiniteComplex) -> list[int]:
    """``dim ker d_i - dim im d_(i-1)`` at every position."""
    if not C.check():
        raise ValueError("d^2 != 0")
    ranks = [rank(d) for d in C.diffs]
    out = []
    for i, n in enumerate(C.dims):
        out_rank = ranks[i] if i < len(ranks) else 0
        in_rank = ranks[i - 1] if i > 0 else 0
        out.append(n - out_rank - in_rank)
    return out


def monomials_up_to(nvars: int, N: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree ``<= N`` in a fixed order."""
    if N < 0:
        return []
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple, left: int, remaining: int):
        if remaining == 0:
            out.append(prefix)
            return
        for k in range(left + 1):
            rec(prefix + (k,), left - k, remaining - 1)

    rec((), N, nvars)
    return sorted(out, key=lambda e: (sum(e), e))


def _poly_terms(f: GradedElement) -> list[tuple[tuple[int, ...], Fraction]]:
    if f.f_power:
        raise ValueError("Koszul entries must be polynomials")
    out = []
    for m, c in f.terms.items():
        if m.odd or m.u:
            raise ValueError("Koszul entries must be even polynomials without u")
        out.append((m.even, c))
    return out


def truncated_koszul_complex(fs: Sequence[GradedElement], N: int) -> FiniteComplex:
    """Koszul complex on ``fs`` cut to total polynomial degree ``<= N``.

    ``e_I`` carries internal degree ``sum(deg f_i, i in I)``, so ``d`` maps the
    truncation into itself. Positions run from ``-c`` to ``0``.
    """
    if not fs:
        raise ValueError("need at least one element")
    nv = len(fs[0].ring.even_vars)
    polys = [_poly_terms(f) for f in fs]
    degs = [max((sum(e) for e, _ in p), default=0) for p in polys]
    c = len(fs)
    layers = []  # layers[k]: list of (I, monomial) basis of K_{-k}
    for k in range(c + 1):
        basis = []
        for I in combinations(range(c), k):
            for e in monomials_up_to(nv, N - sum(degs[i] for i in I)):
                basis.append((I, e))
        layers.append(basis)
    diffs = []
    for k in range(c, 0, -1):
        src, tgt = layers[k], layers[k - 1]
        index = {b: n for n, b in enumerate(tgt)}
        rows = [[Fraction(0)] * len(src) for _ in tgt]
        for col, (I, e) in enumerate(src):
            for m, i in enumerate(I):
                J = I[:m] + I[m + 1:]
                sign = -1 if m % 2 else 1
                for fe, fc in polys[i]:
                    key = (J, tuple(a + b for a, b in zip(e, fe)))
                    rows[index[key]][col] += sign * fc
        diffs.append(RationalMatrix.from_rows(rows, len(src)))
    dims = tuple(len(layers[k]) for k in range(c, -1, -1))
    return FiniteComplex(dims, tuple(diffs), -c)


def truncated_koszul_homology(fs: Sequence[GradedElement], N: int) -> dict[int, int]:
    """Homology dimensions of the degree-``<= N`` Koszul complex, keyed by position."""
    C = truncated_koszul_complex(fs, N)
    return dict(zip(C.positions(), homology_dims(C)))
