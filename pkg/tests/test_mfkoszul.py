from __future__ import annotations

import random
from fractions import Fraction

import pytest

from hpcalc import matrix as mx
from hpcalc.gca import form_ring, polynomial_ring
from hpcalc.mfkoszul import (
    MatrixFactorization,
    canonical_contraction,
    ch0_mf,
    ch1_mf,
    ch1_unit,
    koszul_complex,
    mf_corpus,
    phi_koszul_dual,
    square_classes,
    trace_identity_check,
    truncation_bound,
    verify_square,
)
from hpcalc.sampling import random_element


@pytest.fixture(scope="module")
def corpus():
    return mf_corpus()


def test_koszul_one_variable():
    P = polynomial_ring(["x"])
    f = P.gen("x") ** 2 + 1
    K = koszul_complex([f])
    assert K.rank == 2 and K.degrees == (0, -1)
    assert K.d == [[P.zero, f], [P.zero, P.zero]]
    assert K.E[0] == [[P.zero, P.zero], [P.one, P.zero]]
    assert K.check()


def test_koszul_two_variables():
    P = polynomial_ring(["x", "y"])
    x, y = P.gen("x"), P.gen("y")
    K = koszul_complex([x, y])
    # basis 1, e1, e2, e1e2: d(e1 e2) = f1 e2 - f2 e1
    col = [row[3] for row in K.d]
    assert col == [0, -y, x, 0]
    assert K.check()


def test_koszul_zero_potential():
    P = polynomial_ring(["x"])
    K = koszul_complex([P.zero])
    assert all(not a for row in K.d for a in row)
    assert K.check()


def test_phi_koszul_dual_examples():
    P = polynomial_ring(["x", "y"])
    x, y = P.gen("x"), P.gen("y")
    mf = phi_koszul_dual(koszul_complex([x]))
    assert mf.n == 1 and str(mf.potential) == "x*t1"
    assert mf.check()
    mf2 = phi_koszul_dual(koszul_complex([x, y]))
    assert mf2.n == 2 and str(mf2.potential) == "x*t1 + y*t2"
    D = mf2.differential()
    assert mx.is_scalar(mx.matmul(D, D), mf2.potential)


@pytest.mark.parametrize("c", [1, 2, 3])
def test_phi_koszul_dual_random(c):
    P = polynomial_ring(["x", "y", "z"])
    rng = random.Random(c)
    for _ in range(3):
        fs = [random_element(P, rng, max_exp=2, n_terms=2, u_range=(0, 0)) for _ in range(c)]
        K = koszul_complex(fs)
        assert K.check()
        assert phi_koszul_dual(K).check()


def test_canonical_contraction():
    Q = form_ring(["x"])
    L = Q.localize(Q.gen("x") ** 2)
    x = L.gen("x")
    mf = MatrixFactorization([[x]], [[x]], x * x)
    H = canonical_contraction(mf)
    assert H[0][1] == Fraction(1, 2) * x * L.inv_f(1)
    with pytest.raises(ValueError):
        canonical_contraction(MatrixFactorization([[x]], [[L.zero]], L.zero))
    assert canonical_contraction(MatrixFactorization([], [], x * x)) == []


def test_ch1_unit_examples():
    Qx = form_ring(["x"])
    L = Qx.localize(Qx.gen("x"))
    assert ch1_unit([[L.const(2)]]) == 0
    assert str(ch1_unit([[L.gen("x")]])) == "dx*inv(x)"
    Q2 = form_ring(["x", "y"], u_inverted=True)
    L2 = Q2.localize(Q2.gen("x") * Q2.gen("y"))
    x, y = L2.gen("x"), L2.gen("y")
    w = ch1_unit([[x, L2.zero], [L2.zero, y]])
    assert w == L2.d_of("x") * unit_inverse_of(x) + L2.d_of("y") * unit_inverse_of(y)
    with pytest.raises(ValueError):
        ch1_unit([[x + 1]])


def unit_inverse_of(a):
    from hpcalc.gca import unit_inverse

    return unit_inverse(a)


def test_ch1_mf_examples(corpus):
    # (x, x) of x^2 gives dx/x
    w = ch1_mf(corpus["x^1,x^1"])
    assert w * w.ring.f == w.ring.coerce(form_ring(["x"]).gen("x")) * w.ring.d_of("x")
    rot = ch1_mf(corpus["rotation"])
    assert rot == dR_of_f(rot.ring) * rot.ring.inv_f(1)


def dR_of_f(L):
    from hpcalc.derham import dR

    return dR(L.f)


def test_ch1_mf_trivial():
    Q = form_ring(["x"])
    x = Q.gen("x")
    assert ch1_mf(MatrixFactorization([[Q.one]], [[x]], x)) == 0
    assert ch0_mf(MatrixFactorization([[Q.one]], [[x]], x)) == 0


def test_ch0_examples(corpus):
    assert str(ch0_mf(corpus["x^1,x^1"])) == "x*dx*dt"
    assert str(ch0_mf(corpus["rotation"])) == "2*x*dx*dt + 2*y*dy*dt"


def test_trace_identity(corpus):
    for mf in corpus.values():
        for s in range(1, truncation_bound(form_ring(list(mf.ring.even_vars))) + 1):
            assert trace_identity_check(mf, s)


def test_verify_square_corpus(corpus):
    for name, mf in corpus.items():
        checks = verify_square(mf)
        assert all(c.passed for c in checks), (name, [c for c in checks if not c.passed])


def test_verify_square_trivial_dA():
    Q = form_ring(["x"])
    x = Q.gen("x")
    checks = verify_square(MatrixFactorization([[Q.one]], [[x ** 2]], x ** 2))
    assert all(c.passed for c in checks)


def test_square_classes(corpus):
    cls = square_classes(corpus["x^1,x^1"])
    assert [(str(c.alpha), c.s, c.l) for c in cls] == [("x*dx", 1, 0)]


def test_bad_factorization_reported():
    Q = form_ring(["x"])
    x = Q.gen("x")
    bad = MatrixFactorization([[x]], [[x + 1]], x * x)
    assert not bad.check()
    checks = verify_square(bad)
    assert not checks[0].passed
    with pytest.raises(ValueError):
        MatrixFactorization([[x, x]], [[x]], x)
