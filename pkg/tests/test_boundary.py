from __future__ import annotations

import random

import pytest

from hpcalc.boundary import BoundaryClass, boundary, deformation_ring, normalize_cycle, verify_boundary_via_fiber
from hpcalc.derham import TwistedComplex, dR
from hpcalc.gca import NonHomogeneous, form_ring

from helpers import forms


def _local(names, f):
    R, xs, dxs = forms(*names)
    L = R.localize(f(R))
    return L, [L.gen(n) for n in names], [L.d_of(n) for n in names]


def test_normalize_single_class():
    L, (x,), (dx,) = _local(["x"], lambda R: R.gen("x"))
    (c,) = normalize_cycle(dx * L.inv_f(1))
    assert (str(c.alpha), c.s, c.l) == ("dx", 1, 0)


def test_normalize_two_u_powers():
    # dx/x + dx dy dz u / x^2 over Q[x, y, z], f = x: both pieces have degree -1
    L, (x, y, z), (dx, dy, dz) = _local(["x", "y", "z"], lambda R: R.gen("x"))
    w = dx * L.inv_f(1) + (dx * dy * dz * L.inv_f(2)).shift_u(1)
    got = [(str(c.alpha), c.s, c.l) for c in normalize_cycle(w)]
    assert got == [("dx", 1, 0), ("dx*dy*dz", 2, 1)]


def test_normalize_rejects_non_cycle_and_mixed_degree():
    L, (x, y), (dx, dy) = _local(["x", "y"], lambda R: R.gen("x"))
    with pytest.raises(ValueError):
        normalize_cycle(x)
    with pytest.raises(NonHomogeneous):
        normalize_cycle(dx * L.inv_f(1) + (dx * dy * L.inv_f(2)).shift_u(1))


def test_boundary_examples():
    Q, (x,), (dx,) = forms("x")
    assert str(boundary(BoundaryClass(x * dx, 1, 0), x * x)) == "x*dx*dt"
    assert str(boundary(BoundaryClass(dx, 1, 2), x)) == "dx*dt*u^2"
    assert boundary(BoundaryClass(x * dx, 0, 3), x) == 0
    with pytest.raises(ValueError):
        boundary(BoundaryClass(x * x, 1, 0), x)  # f d(alpha) != s df alpha


def test_boundary_class_validation():
    Q, (x,), (dx,) = forms("x")
    with pytest.raises(ValueError):
        BoundaryClass(dx.shift_u(1), 1, 0)
    with pytest.raises(ValueError):
        BoundaryClass(dx, -1, 0)


@pytest.mark.parametrize(
    "alpha,s,l,f",
    [
        (lambda x, dx: x * dx, 1, 0, lambda x: x * x),
        (lambda x, dx: dx, 1, 0, lambda x: x),
        (lambda x, dx: dx, 1, 2, lambda x: x),
        (lambda x, dx: x * dx, 0, 1, lambda x: x),
        (lambda x, dx: x ** 3 * dx, 2, -1, lambda x: x ** 2),
    ],
)
def test_verify_boundary_via_fiber(alpha, s, l, f):
    Q, (x,), (dx,) = forms("x")
    c = BoundaryClass(alpha(x, dx), s, l)
    checks = verify_boundary_via_fiber(c, f(x), strict=True)
    assert all(ch.passed for ch in checks), [ch for ch in checks if not ch.passed]


def test_boundary_is_linear_for_equal_s_l():
    Q, (x, y), (dx, dy) = forms("x", "y")
    f = x * x + y * y
    a1, a2 = dx * dy * x, dx * dy * (y + 2)
    b = boundary(BoundaryClass(a1, 2, 0), f) + boundary(BoundaryClass(a2, 2, 0), f)
    assert b == boundary(BoundaryClass(a1 + a2, 2, 0), f)


def test_boundary_lands_in_cycles_random():
    Q, (x, y), (dx, dy) = forms("x", "y")
    rng = random.Random(5)
    for _ in range(10):
        p = sum((rng.randint(-3, 3) * x ** rng.randint(0, 3) * y ** rng.randint(0, 3) for _ in range(3)), Q.zero)
        f = x * y + 1
        c = BoundaryClass(p * dx * dy, rng.randint(0, 3), rng.randint(-2, 2))
        g = boundary(c, f)
        D = TwistedComplex(g.ring, g.ring.coerce(f) * g.ring.gen("t"))
        assert not D(g)
