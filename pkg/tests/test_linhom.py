from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest

from hpcalc.gca import polynomial_ring
from hpcalc.linhom import (
    FiniteComplex,
    RationalMatrix,
    homology_dims,
    kernel_basis,
    monomials_up_to,
    rank,
    truncated_koszul_homology,
)


def test_kernel_examples():
    (v,) = kernel_basis([[1, 2], [2, 4]])
    assert v[0] == -2 * v[1] != 0
    assert kernel_basis([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []
    assert len(kernel_basis(RationalMatrix.zero(2, 3))) == 3


def test_rank_nullity_random():
    rng = random.Random(0)
    for _ in range(60):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        M = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(c)] for _ in range(r)]
        K = kernel_basis(M)
        assert rank(M) + len(K) == c
        for v in K:
            assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)


def test_homology_examples():
    assert homology_dims(FiniteComplex((1, 1), (RationalMatrix.from_rows([[1]]),))) == [0, 0]
    assert homology_dims(FiniteComplex((1, 1), (RationalMatrix.from_rows([[0]]),))) == [1, 1]


def test_exact_two_term_complexes():
    rng = random.Random(1)
    for _ in range(10):
        n = rng.randint(1, 4)
        M = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        if rank(M) < n:
            continue
        assert homology_dims(FiniteComplex((n, n), (RationalMatrix.from_rows(M),))) == [0, 0]


def test_d_squared_checked():
    d = RationalMatrix.from_rows([[1]])
    with pytest.raises(ValueError):
        homology_dims(FiniteComplex((1, 1, 1), (d, d)))


def test_koszul_homology_examples():
    P = polynomial_ring(["x"])
    x = P.gen("x")
    assert truncated_koszul_homology([x * x], 5) == {-1: 0, 0: 2}
    non_regular = truncated_koszul_homology([x, x], 4)
    assert any(v for p, v in non_regular.items() if p != 0)
    P2 = polynomial_ring(["x", "y"])
    assert truncated_koszul_homology([P2.gen("x"), P2.gen("y")], 4) == {-2: 0, -1: 0, 0: 1}


def _monomial_quotient_dim(nvars, gens, N):
    # monomials of degree <= N divisible by no generator
    return sum(
        1
        for e in monomials_up_to(nvars, N)
        if not any(all(a >= b for a, b in zip(e, g)) for g in gens)
    )


def test_monomial_regular_sequences():
    rng = random.Random(2)
    P = polynomial_ring(["x", "y", "z"])
    for _ in range(10):
        k = rng.randint(1, 3)
        idx = rng.sample(range(3), k)
        gens = []
        for i in idx:
            e = [0, 0, 0]
            e[i] = rng.randint(1, 3)
            gens.append(tuple(e))
        fs = [P.element({P.monomial({n: a for n, a in zip("xyz", g) if a}): 1}) for g in gens]
        dims = truncated_koszul_homology(fs, 4)
        assert all(v == 0 for p, v in dims.items() if p != 0)
        assert dims[0] == _monomial_quotient_dim(3, gens, 4)
