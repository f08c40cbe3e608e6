from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from hpcalc.gca import form_ring
from hpcalc.section3 import FiberElement, MComplex, NotInKernel, sample_At, sample_local, sample_M, verify_keylemma


@pytest.fixture(scope="module")
def mx():
    A = form_ring(["x"])
    mc = MComplex(A, A.gen("x"))
    R, L = mc.ring, mc.local_ring
    return mc, R.gen("x"), R.gen("t"), R.d_of("x"), R.d_of("t"), R.u_power(1), L


def test_nabla_examples(mx):
    mc, x, t, dx, dt, u, L = mx
    f = mc.f
    assert mc.nabla(mc.ring.one) == f
    assert mc.nabla(t ** 3) == f * t ** 3 + 3 * t * t * u
    assert mc.nabla(x * t * t + t * dx) == f * x * t * t + 2 * x * t * u + f * t * dx + u * dx


def test_nabla_rejects_dt(mx):
    mc, x, t, dx, dt, u, L = mx
    with pytest.raises(ValueError):
        mc.nabla(dt)


def test_phi_examples(mx):
    mc, x, t, dx, dt, u, L = mx
    assert mc.phi(mc.ring.one) == -L.inv_f(1)
    assert mc.phi(t * t) == -2 * L.inv_f(3) * L.u_power(2)
    assert mc.phi(mc.nabla(t)) == 0
    assert mc.phi(t) == L.u_power(1) * L.inv_f(2)


def test_phi_nabla_on_t_free(mx):
    # on t-free elements phi(nabla(m)) = -can(m), so it vanishes only after multiplying by t
    mc, x, t, dx, dt, u, L = mx
    m = x * dx
    assert mc.phi(mc.nabla(m)) == -mc.can(m)
    assert mc.phi(mc.nabla(t * m)) == 0


def test_preimage_examples(mx):
    mc, x, t, dx, dt, u, L = mx
    f = mc.f
    assert mc.preimage_nabla_t(mc.ring.zero) == 0
    assert mc.preimage_nabla_t(f * t + u) == 1
    assert mc.preimage_nabla_t(f * t * t + 2 * t * u) == t
    with pytest.raises(NotInKernel):
        mc.preimage_nabla_t(mc.ring.one)


def test_phi_section_examples(mx):
    mc, x, t, dx, dt, u, L = mx
    assert mc.phi_section(-L.inv_f(1)) == 1
    assert mc.phi_section(L.u_power(1) * L.inv_f(2)) == t
    alpha = L.gen("x") + 3
    # alpha u^3 / f^2 has preimage +alpha t u^2 (phi of it is checked below)
    p = mc.phi_section(alpha * L.u_power(3) * L.inv_f(2))
    assert p == (x + 3) * t * u * u
    assert mc.phi(p) == alpha * L.u_power(3) * L.inv_f(2)
    with pytest.raises(ValueError):
        mc.phi_section(L.gen("x") + 1)


def test_contract_examples(mx):
    mc, x, t, dx, dt, u, L = mx
    assert mc.contract(t ** 3) == 0
    assert mc.contract(dt) == L.inv_f(1)
    lt = L.gen("t")
    assert mc.contract(t * dt) == lt * L.inv_f(1) - L.u_power(1) * L.inv_f(2)


def test_cone_split_examples(mx):
    mc, x, t, dx, dt, u, L = mx
    assert mc.cone_split(x + t * dt) == (x, t)
    assert mc.cone_split(dt * dx) == (0, -dx)
    assert mc.cone_split(t * t) == (t * t, 0)


def test_sigma_examples(mx):
    mc, x, t, dx, dt, u, L = mx
    assert mc.sigma(mc.ring.one) == FiberElement(mc.ring.one, L.zero)
    assert mc.sigma(x) == FiberElement(x, L.zero)


def test_sigma_on_boundary_cycle():
    # sigma(d(alpha) t^s) = (0, -hbar(...)) for alpha = x dx, f = x^2, s = 1: a cycle
    A = form_ring(["x"])
    x = A.gen("x")
    mc = MComplex(A, x * x)
    R, L = mc.ring, mc.local_ring
    w = R.gen("x") * R.d_of("x") * R.d_of("t")
    assert not mc.hn_At(w)
    s = mc.sigma(w, strict=True)
    assert s.top == 0
    assert s.bottom == L.gen("x") * L.d_of("x") * L.inv_f(1)
    with pytest.raises(ValueError):
        mc.sigma(R.gen("x"), strict=True)


CONFIGS = {
    "line": (["x"], lambda A: A.gen("x"), lambda A: 0),
    "double-point": (["x"], lambda A: A.gen("x") ** 2, lambda A: 0),
    "circle": (["x", "y"], lambda A: A.gen("x") ** 2 + A.gen("y") ** 2, lambda A: 0),
    "induction-step": ([("x", 0), ("t1", 2)], lambda A: A.gen("x"), lambda A: (A.gen("x") + 1) * A.gen("t1")),
    "unit": (["x"], lambda A: A.one, lambda A: 0),
}


@pytest.mark.parametrize("name", sorted(CONFIGS))
def test_verify_keylemma_configs(name):
    vars_, f, g = CONFIGS[name]
    A = form_ring(vars_)
    checks = verify_keylemma(A, f(A), g(A), samples=12, seed=3)
    failed = [c for c in checks if not c.passed]
    assert not failed, failed


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_homotopy_identity_random(seed):
    A = form_ring(["x", "y"])
    mc = MComplex(A, A.gen("x") * A.gen("y") + 1)
    w = sample_local(mc, random.Random(seed))
    assert mc.hn_Aft(mc.contract(w)) + mc.contract(mc.hn_Aft(w)) == w


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_cone_iso_intertwines(seed):
    A = form_ring(["x"])
    mc = MComplex(A, A.gen("x") ** 2 + 1)
    w = sample_At(mc, random.Random(seed))
    assert mc.cone_iso(mc.hn_At(w)) == mc.fiber_nabla_d(mc.cone_iso(w))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_preimage_roundtrip_random(seed):
    A = form_ring(["x", "y"])
    mc = MComplex(A, A.gen("x") ** 2 + A.gen("y"))
    m = sample_M(mc, random.Random(seed))
    assert mc.preimage_nabla_t(mc.nabla_t(m)) == m


def test_invalid_inputs():
    A = form_ring(["x"])
    with pytest.raises(ValueError):
        MComplex(A, A.zero)
    with pytest.raises(ValueError):
        MComplex(A, A.gen("x"), A.gen("x"))
    from hpcalc.gca import polynomial_ring

    with pytest.raises(ValueError):
        MComplex(polynomial_ring(["x"]), 1)
