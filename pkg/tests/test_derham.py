from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from hpcalc.derham import TwistedComplex, apply_D, dR, is_cycle
from hpcalc.gca import degree, form_ring

from helpers import forms, homogeneous_sample, sign

seeds = st.integers(0, 10**6)


def test_dR_examples():
    R, (x, y), (dx, dy) = forms("x", "y")
    assert dR(x * x * y) == 2 * x * y * dx + x * x * dy
    assert dR(x * dy) == dx * dy
    L = R.localize(x)
    assert dR(L.inv_f(1)) == -L.d_of("x") * L.inv_f(2)


def test_dR_requires_forms():
    from hpcalc.gca import polynomial_ring

    P = polynomial_ring(["x"])
    with pytest.raises(ValueError):
        dR(P.gen("x"))


def _deformation():
    R = form_ring([("x", 0), ("t", 2)], u_inverted=True)
    x, t = R.gen("x"), R.gen("t")
    f = x * x + 1
    return R, x, t, f


def test_apply_D_examples():
    R, x, t, f = _deformation()
    D = TwistedComplex(R, f * t)
    df, dt, dx, u = dR(f), R.d_of("t"), R.d_of("x"), R.u_power(1)
    assert apply_D(D, R.one) == t * df + f * dt
    assert apply_D(D, x) == x * t * df + x * f * dt + u * dx


def test_is_cycle_examples():
    R = form_ring([("x", 0), ("t", 2)], u_inverted=True)
    x, t = R.gen("x"), R.gen("t")
    D = TwistedComplex(R, x * t)
    for s in range(1, 4):
        alpha = x ** s * R.d_of("x")
        assert is_cycle(D, dR(alpha) * t ** s)
    D0 = TwistedComplex(R, R.zero)
    assert not is_cycle(D0, x)
    assert is_cycle(D0, R.one)


def test_potential_degree_checked():
    R, (x,), _ = forms("x")
    with pytest.raises(ValueError):
        TwistedComplex(R, x)
    with pytest.raises(ValueError):
        TwistedComplex(form_ring(["x"]), form_ring(["x"]).u_power(1))


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_d_squared_and_leibniz(seed):
    R, (x, y, z), _ = forms("x", "y", "z")
    a, b = homogeneous_sample(R, seed), homogeneous_sample(R, seed + 1)
    assert not dR(dR(a))
    assert dR(a * b) == dR(a) * b + a * dR(b) * sign(degree(a) or 0)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_d_squared_localized(seed):
    R, (x, y), _ = forms("x", "y")
    L = R.localize(x * y + 1)
    a = homogeneous_sample(L, seed, f_power=seed % 3)
    assert not dR(dR(a))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_D_squared_random_potential(seed):
    R, (x, y, z), _ = forms("x", "y", "z")
    h = homogeneous_sample(R, seed, u_range=(1, 1), odd_prob=0.0)
    D = TwistedComplex(R, h)
    a = homogeneous_sample(R, seed + 7)
    assert not D(D(a))


def test_boundary_computation_identity():
    # D(d(alpha) t^s) for f d(alpha) = s df alpha, potential ft
    R = form_ring([("x", 0), ("y", 0), ("t", 2)], u_inverted=True)
    x, y, t = R.gen("x"), R.gen("y"), R.gen("t")
    dx, dy, dt, u = R.d_of("x"), R.d_of("y"), R.d_of("t"), R.u_power(1)
    f = x * x
    D = TwistedComplex(R, f * t)
    for alpha, s in [(x * dx, 1), (y * dx * dy, 2), (y * dy, 0)]:
        assert f * dR(alpha) == dR(f) * alpha * s
        da = dR(alpha) * t ** s
        j1 = degree(da) if da else 0
        rhs = (dR(alpha) * t ** max(s - 1, 0) * dt * u * s + dR(f) * alpha * t ** s * dt * s) * sign(j1)
        if s == 0:
            rhs = R.zero
        assert D(da) == rhs
