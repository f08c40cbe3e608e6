"""Normal forms of periodic de Rham cycles on ``Q[1/f]`` and the boundary map
into ``HP(Q[t], ft)``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .derham import dR
from .gca import GradedElement, Monomial, NonHomogeneous, RingSpec
from .report import Check, run_check
from .section3 import FiberElement, MComplex

__all__ = ["BoundaryClass", "normalize_cycle", "boundary", "verify_boundary_via_fiber", "deformation_ring"]


@dataclass(frozen=True)
class BoundaryClass:
    """The cycle ``alpha / f^s * u^l`` with ``alpha`` a form on ``Q``."""

    alpha: GradedElement
    s: int
    l: int

    def __post_init__(self):
        a = self.alpha
        if a.f_power or any(m.u for m in a.terms):
            raise ValueError("alpha must be a polynomial form without u")
        if self.s < 0:
            raise ValueError("s must be nonnegative")

    def satisfies_cycle_condition(self, f: GradedElement) -> bool:
        """``f * d(alpha) == s * df * alpha``."""
        f = self.alpha.ring.coerce(f)
        return f * dR(self.alpha) == dR(f) * self.alpha * self.s

    def form_degree(self) -> int:
        degs = {len(m.odd) for m in self.alpha.terms}
        if len(degs) > 1:
            raise NonHomogeneous("alpha mixes form degrees")
        return degs.pop() if degs else 0

    def homological_degree(self) -> int:
        """``j`` with ``alpha`` in ``Omega^(2l + j)``."""
        return self.form_degree() - 2 * self.l

    def as_element(self, ring: RingSpec) -> GradedElement:
        """``alpha u^l / f^s`` inside the localized ring ``ring``."""
        a = ring.coerce(ring.base.coerce(self.alpha))
        return (a * ring.inv_f(self.s)).shift_u(self.l)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def deformation_ring(Q: RingSpec, t: str = "t") -> RingSpec:
    """Forms on ``Q[t]`` with ``u`` inverted (target of the boundary map)."""
    return Q.base.with_u_inverted().extend([(t, 2)])


def normalize_cycle(w: GradedElement) -> list[BoundaryClass]:
    """Split a pure-degree cycle of ``HP(Q[1/f], 0)`` into classes ``alpha/f^s u^l``.

    Each ``u``-power is brought to its own canonical denominator; the pieces are
    individually closed because they occupy distinct form degrees.
    """
    ring = w.ring
    if not ring.is_localized:
        raise ValueError("expected an element of a localized ring")
    w.degree()  # raises NonHomogeneous on mixed degree
    if dR(w):
        raise ValueError(f"{w} is not a cycle for u*d")
    groups: dict[int, dict] = {}
    for m, c in w.terms.items():
        groups.setdefault(m.u, {})[Monomial(m.even, m.odd, 0)] = c
    base = ring.base
    classes = []
    for l in sorted(groups):
        part = GradedElement(ring, groups[l], w.f_power)
        alpha = GradedElement(base, part.terms, 0, _canonical=True)
        classes.append(BoundaryClass(alpha, part.f_power, l))
    total = ring.zero
    for c in classes:
        total = total + c.as_element(ring)
    assert total == w, "normal form does not reassemble the cycle"
    return classes


def boundary(c: BoundaryClass, f: GradedElement, t: str = "t") -> GradedElement:
    """``alpha/f^s u^l  ->  (-1)^s / s! * d(alpha t^s) u^(l+1-s)``.

    ``d`` is the de Rham differential of ``Q[t]`` applied to the whole product,
    so ``dt`` terms appear. Classes with ``s == 0`` lift to ``Q`` and map to zero.
    """
    Q = c.alpha.ring
    target = deformation_ring(Q, t)
    if not c.satisfies_cycle_condition(f):
        raise ValueError("class violates f d(alpha) = s df alpha")
    if c.s == 0:
        return target.zero
    a = target.coerce(c.alpha) * target.gen(t) ** c.s
    return (dR(a) * Fraction(_sign(c.s), factorial(c.s))).shift_u(c.l + 1 - c.s)


def verify_boundary_via_fiber(c: BoundaryClass, f: GradedElement, strict: bool = True, t: str = "t") -> list[Check]:
    """Recompute the boundary through ``sigma = (tau, -hbar)`` into ``fiber(can_2)``.

    The connecting map sends ``alpha/f^s u^l`` to ``(0, alpha/f^s u^l)``; the
    boundary formula is right when ``sigma(gamma)`` is that element, or differs
    from it by a boundary of the fiber (the ``s == 0`` case).
    """
    Q = c.alpha.ring.base
    mc = MComplex(Q, f, 0, t)
    ring, L = mc.ring, mc.local_ring
    f_Q = Q.coerce(f)
    alpha = ring.coerce(c.alpha)
    s, l = c.s, c.l
    tvar, dtvar = ring.gen(t), ring.d_of(t)
    gamma_holder: dict = {}

    def gamma():
        if "g" not in gamma_holder:
            gamma_holder["g"] = ring.coerce(boundary(c, f_Q, t))
        return gamma_holder["g"]

    def cycle_condition():
        return c.satisfies_cycle_condition(f_Q), None

    def remark():
        w = dR(mc.f) * dR(alpha)
        return not w, w

    def source_cycle():
        w = mc.hn_Af(c.as_element(L))
        return not w, w

    def gamma_cycle():
        w = mc.hn_At(gamma())
        return not w, w

    def explicit_computation():
        if s == 0:
            return True, None
        da = dR(alpha)
        parity = (c.form_degree() + 1) & 1
        sign = -1 if parity else 1  # (-1)^(j+1), j+1 the degree of d(alpha) t^s mod 2
        lhs = mc.hn_At(da * tvar ** s)
        tail = (da * tvar ** (s - 1) * dtvar).shift_u(1) * s + mc.df * alpha * tvar ** s * dtvar * s
        second = mc.hn_At(alpha * tvar ** (s - 1) * dtvar * s)
        ok = lhs == tail * sign and second == tail
        return ok, None if ok else f"{lhs} vs {tail * sign}"

    def tau_vanishes():
        w = mc.tau(gamma())
        return not w, w

    def matches_connecting_map():
        image = mc.sigma(gamma(), strict=strict)
        expected = FiberElement(ring.zero, c.as_element(L))
        if s == 0:
            # (0, alpha u^l) = d(-alpha u^l, 0) in fiber(can_2)
            lift = -(alpha.shift_u(l))
            diff = expected - image
            ok = diff == mc.fiber_can2_d(FiberElement(lift, L.zero))
            return ok, None if ok else diff
        j = c.homological_degree()
        closed_form = -Fraction(_sign(s), factorial(s)) * _sign(j) * _sign(2 * l + j + s - 1) * factorial(s - 1) * s
        ok = image == expected and expected.bottom == c.as_element(L) * closed_form
        return ok, None if ok else f"sigma(gamma) = {image}, expected {expected}"

    def sigma_cycle():
        w = mc.fiber_can2_d(mc.sigma(gamma(), strict=strict))
        return w.is_zero(), None if w.is_zero() else w

    return [
        run_check("cycle condition f da = s df a", "cycle-normal-form", cycle_condition),
        run_check("df da = 0", "cycle-normal-form", remark),
        run_check("class is a cycle on Q[1/f]", "cycle-normal-form", source_cycle),
        run_check("gamma is a cycle in HP(Q[t], ft)", "boundary-formula", gamma_cycle),
        run_check("explicit differential of d(alpha) t^s", "boundary-formula", explicit_computation),
        run_check("tau(gamma) = 0", "boundary-formula", tau_vanishes),
        run_check("sigma(gamma) = connecting image", "boundary-formula", matches_connecting_map),
        run_check("sigma(gamma) is a fiber cycle", "sigma", sigma_cycle),
    ]
