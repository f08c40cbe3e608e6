"""Operator calculus on the complex ``M = (Omega_A[t, u], t df + dg + u d)``.

Everything lives in one ambient ring of forms on ``A[t]`` (``u`` inverted) and its
localization at ``f``. Conventions fixed here:

* ``fiber(p: X -> Y)`` is ``X (+) Y[-1]`` with ``d(x, y) = (d_X x, -p(x) - d_Y y)``.
  With this choice ``sigma = (tau, -hbar)`` is an honest chain map.
* The splitting ``HN(A[t], ft + g) ~ fiber(nabla)`` sends ``w1 + w2 dt`` to
  ``(w1, (-1)^|w| w2)``; the sign sits on the ``dt``-component only.
* On ``t``-free elements ``phi(nabla(m)) = -can(m)``, so the map of fibers induced
  by ``(ev_0, -phi)`` is the one that commutes with everything above.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .derham import TwistedComplex, dR
from .gca import (
    GradedElement,
    Monomial,
    NotDivisible,
    RingSpec,
    _f_power_terms,
    _mul_terms,
    divide_exact,
    partial_t,
    substitute_zero,
)
from .report import Check, first_failure, run_check
from .sampling import random_element

__all__ = ["NotInKernel", "FiberElement", "MComplex", "verify_keylemma"]


class NotInKernel(ValueError):
    """The element is not in the kernel of ``phi``."""


@dataclass(frozen=True)
class FiberElement:
    top: GradedElement
    bottom: GradedElement

    def __add__(self, other: FiberElement) -> FiberElement:
        return FiberElement(self.top + other.top, self.bottom + other.bottom)

    def __neg__(self) -> FiberElement:
        return FiberElement(-self.top, -self.bottom)

    def __sub__(self, other: FiberElement) -> FiberElement:
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.top and not self.bottom

    def __str__(self):
        return f"({self.top}, {self.bottom})"


def fiber_differential(x: FiberElement, d_top, d_bottom, p) -> FiberElement:
    """Differential of ``fiber(p)``: ``(x, y) -> (d x, -p(x) - d y)``."""
    return FiberElement(d_top(x.top), -p(x.top) - d_bottom(x.bottom))


class MComplex:
    """The complex ``M_{A,f,g}`` together with every complex its calculus touches.

    ``A`` is a ring of forms (without ``t``); ``f`` has degree 0 and ``g`` degree 2.
    """

    def __init__(self, A: RingSpec, f, g=0, t: str = "t"):
        if not A.is_form_ring:
            raise ValueError("A must be a ring of differential forms")
        A = A.with_u_inverted().base
        self.A = A
        self.t = t
        self.ring = A.extend([(t, 2)])
        self.f = self.ring.coerce(A.coerce(f))
        self.g = self.ring.coerce(A.coerce(g))
        if self.f.f_power or (self.f and self.f.degree() != 0) or not self.f:
            raise ValueError("f must be a nonzero degree-0 polynomial")
        if self.g and self.g.degree() != 2:
            raise ValueError("g must have degree 2")
        self.local_ring = self.ring.localize(self.f)
        self._ti = self.ring.even_index(t)
        self._dti = self.ring.partner(t)
        self.df = dR(self.f)
        self.dg = dR(self.g)
        h = self.f * self.ring.gen(t) + self.g
        self.hn_At = TwistedComplex(self.ring, h)
        self.hn_A = TwistedComplex(self.ring, self.g)
        self.hn_Af = TwistedComplex(self.local_ring, self.g)
        self.hn_Aft = TwistedComplex(self.local_ring, h)
        self._tdf = self.ring.gen(t) * self.df

    # -- helpers --------------------------------------------------------------------
    def _in_M(self, m: GradedElement) -> GradedElement:
        m = self.ring.coerce(m)
        if m.f_power:
            raise ValueError("elements of M have no denominators")
        if any(self._dti in mono.odd for mono in m.terms):
            raise ValueError("elements of M contain no dt")
        return m

    def _strip_t(self, mono: Monomial) -> Monomial:
        e = list(mono.even)
        e[self._ti] = 0
        return Monomial(tuple(e), mono.odd, mono.u)

    def _split_dt(self, mono: Monomial):
        """``mono = sign * rest * dt`` with ``dt`` moved to the far right."""
        pos = mono.odd.index(self._dti)
        after = len(mono.odd) - pos - 1
        rest = mono.odd[:pos] + mono.odd[pos + 1:]
        return (-1 if after & 1 else 1), Monomial(mono.even, rest, mono.u)

    def can(self, a: GradedElement) -> GradedElement:
        """Inverting ``f``."""
        return self.local_ring.coerce(a)

    def ev0(self, a: GradedElement) -> GradedElement:
        """Setting ``t = dt = 0``."""
        return substitute_zero(a, [self.t])

    tau = ev0

    # -- M and its operators ---------------------------------------------------------
    def D_M(self, m: GradedElement) -> GradedElement:
        m = self._in_M(m)
        return (self._tdf + self.dg) * m + dR(m, [self.t]).shift_u(1)

    def nabla(self, m: GradedElement) -> GradedElement:
        """``f * m + u * dm/dt``."""
        m = self._in_M(m)
        return self.f * m + partial_t(m, self.t).shift_u(1)

    def nabla_t(self, m: GradedElement) -> GradedElement:
        """``nabla(t * m)``."""
        return self.nabla(self.ring.gen(self.t) * self._in_M(m))

    def phi(self, m: GradedElement) -> GradedElement:
        """``t^i -> (-1)^(i+1) i! u^i / f^(i+1)``, extended ``Omega_A[u]``-linearly."""
        m = self._in_M(m)
        if not m:
            return self.local_ring.zero
        groups: dict[int, dict] = {}
        for mono, c in m.terms.items():
            groups.setdefault(mono.even[self._ti], {})[self._strip_t(mono)] = c
        top = max(groups)
        num: dict[Monomial, Fraction] = {}
        for i, terms in groups.items():
            c = (-1) ** (i + 1) * factorial(i)
            scaled = {Monomial(mo.even, mo.odd, mo.u + i): c * v for mo, v in terms.items()}
            if top - i:
                scaled = _mul_terms(scaled, _f_power_terms(self.local_ring, top - i))
            for mo, v in scaled.items():
                num[mo] = num.get(mo, 0) + v
        return GradedElement(self.local_ring, num, top + 1)

    def preimage_nabla_t(self, m: GradedElement) -> GradedElement:
        """Solve ``nabla(t * r) = m`` for ``r`` by the coefficient recursion.

        Writing ``m = sum w[i,j] t^i u^j`` and ``r = sum b[i,j] t^i u^j``::

            b[0,j] = w[0,j+1]
            b[i,0] = w[i+1,0] / f
            b[i,j] = (w[i,j+1] - f b[i-1,j+1]) / (i+1)
        """
        m = self._in_M(m)
        if self.phi(m):
            raise NotInKernel(f"phi({m}) != 0")
        if not m:
            return self.ring.zero
        shift = -min(0, m.min_u())
        m_shifted = m.shift_u(shift)
        omega: dict[tuple[int, int], dict] = {}
        for mono, c in m_shifted.terms.items():
            key = (mono.even[self._ti], mono.u)
            omega.setdefault(key, {})[Monomial(self._strip_t(mono).even, mono.odd, 0)] = c
        ring = self.ring

        def w(i, j):
            t = omega.get((i, j))
            return GradedElement(ring, t, 0, _canonical=True) if t else ring.zero

        weight = max(i + j for i, j in omega)
        beta: dict[tuple[int, int], GradedElement] = {}
        for j in range(weight):
            beta[0, j] = w(0, j + 1)
        for i in range(weight):
            try:
                beta[i, 0] = divide_exact(w(i + 1, 0), self.f)
            except NotDivisible:
                raise NotDivisible(f"f does not divide the t^{i + 1} coefficient") from None
        for i in range(1, weight):
            for j in range(1, weight - i):
                beta[i, j] = (w(i, j + 1) - self.f * beta[i - 1, j + 1]) * Fraction(1, i + 1)
        t = ring.gen(self.t)
        result = ring.zero
        for (i, j), b in beta.items():
            if b:
                result = result + (b * t ** i).shift_u(j)
        result = result.shift_u(-shift)
        if self.nabla_t(result) != m:
            raise NotInKernel("recursion did not reproduce the input")
        return result

    def phi_section(self, target: GradedElement, power: int | None = None) -> GradedElement:
        """``alpha u^l / f^s  ->  (-1)^s / (s-1)! * alpha t^(s-1) u^(l-s+1)`` (needs ``s >= 1``).

        ``s`` is the canonical denominator exponent unless ``power`` asks for the
        target to be rewritten over a higher power of ``f`` first.
        """
        target = self.local_ring.coerce(target)
        if not target:
            return self.ring.zero
        s = target.f_power if power is None else power
        if s == 0:
            raise ValueError("target has no denominator; pass power >= 1 to write it over f")
        if s < target.f_power:
            raise ValueError("power is below the denominator exponent")
        if target.uses_var(self.t) or any(self._dti in mo.odd for mo in target.terms):
            raise ValueError("target must not involve t")
        num = GradedElement(self.ring, target._scaled_numerator(s), 0, _canonical=True)
        c = Fraction((-1) ** s, factorial(s - 1))
        return (num * self.ring.gen(self.t) ** (s - 1) * c).shift_u(1 - s)

    # -- homotopies on the localized side -----------------------------------------------------
    def contract(self, w: GradedElement) -> GradedElement:
        """Contracting homotopy of ``HN(A[1/f, t], ft + g)``.

        ``w1 t^i + w2 t^j dt -> (-1)^|w2| sum_l (-1)^l w2 u^l / f^(l+1) * d^l(t^j)/dt^l``.
        """
        w = self.local_ring.coerce(w)
        s0 = w.f_power
        by_power: dict[int, dict] = {}
        for mono, c in w.terms.items():
            if self._dti not in mono.odd:
                continue
            sign, rest = self._split_dt(mono)
            j = rest.even[self._ti]
            eps = -1 if len(rest.odd) & 1 else 1
            for ell in range(j + 1):
                coeff = c * sign * eps * (-1) ** ell * (factorial(j) // factorial(j - ell))
                e = list(rest.even)
                e[self._ti] = j - ell
                key = Monomial(tuple(e), rest.odd, rest.u + ell)
                bucket = by_power.setdefault(s0 + ell + 1, {})
                bucket[key] = bucket.get(key, 0) + coeff
        if not by_power:
            return self.local_ring.zero
        top = max(by_power)
        num: dict[Monomial, Fraction] = {}
        for p, terms in by_power.items():
            if top - p:
                terms = _mul_terms(terms, _f_power_terms(self.local_ring, top - p))
            for mo, v in terms.items():
                num[mo] = num.get(mo, 0) + v
        return GradedElement(self.local_ring, num, top)

    def h_bar(self, w: GradedElement) -> GradedElement:
        """``w1 t^a + w2 t^b dt -> (-1)^(|w2| + b) b! w2 u^b / f^(b+1)``."""
        w = self.ring.coerce(w)
        if w.f_power:
            raise ValueError("h_bar acts on forms over A[t]")
        result = self.local_ring.zero
        for mono, c in w.terms.items():
            if self._dti not in mono.odd:
                continue
            sign, rest = self._split_dt(mono)
            b = rest.even[self._ti]
            eps = -1 if (len(rest.odd) + b) & 1 else 1
            rest = Monomial(self._strip_t(rest).even, rest.odd, rest.u + b)
            coeff = c * sign * eps * factorial(b)
            result = result + GradedElement(self.local_ring, {rest: coeff}, b + 1)
        return result

    # -- cones and fibers -----------------------------------------------------------------------
    def cone_split(self, w: GradedElement) -> tuple[GradedElement, GradedElement]:
        """Unique ``(w1, w2)`` with ``w = w1 + w2 * dt`` and neither part containing ``dt``."""
        ring = w.ring
        no_dt: dict = {}
        dt_part: dict = {}
        for mono, c in w.terms.items():
            if self._dti in mono.odd:
                sign, rest = self._split_dt(mono)
                dt_part[rest] = dt_part.get(rest, 0) + sign * c
            else:
                no_dt[mono] = c
        return GradedElement(ring, no_dt, w.f_power), GradedElement(ring, dt_part, w.f_power)

    def cone_iso(self, w: GradedElement) -> FiberElement:
        """``HN(A[t], ft+g) -> fiber(nabla)``: ``w1 + w2 dt -> (w1, (-1)^|w| w2)``."""
        w = self.ring.coerce(w)
        w1, w2 = self.cone_split(w)
        signed = {mo: (c if len(mo.odd) & 1 else -c) for mo, c in w2.terms.items()}
        return FiberElement(w1, GradedElement(self.ring, signed, 0, _canonical=True))

    def fiber_nabla_d(self, x: FiberElement) -> FiberElement:
        return fiber_differential(x, self.D_M, self.D_M, self.nabla)

    def fiber_can2_d(self, x: FiberElement) -> FiberElement:
        return fiber_differential(x, self.hn_A, self.hn_Af, self.can)

    def fiber_map(self, x: FiberElement) -> FiberElement:
        """``fiber(nabla) -> fiber(can_2)`` induced by ``(ev_0, -phi)``."""
        return FiberElement(self.ev0(x.top), -self.phi(x.bottom))

    def sigma(self, w: GradedElement, strict: bool = False) -> FiberElement:
        """``(tau(w), -hbar(w))`` in ``fiber(can_2)``."""
        w = self.ring.coerce(w)
        if strict and self.hn_At(w):
            raise ValueError(f"{w} is not a cycle")
        return FiberElement(self.tau(w), -self.h_bar(w))


# -- sampling ------------------------------------------------------------------------------------

def _A_even(mc: MComplex) -> list[str]:
    return [n for n, _ in mc.A.even_vars]


def _A_odd(mc: MComplex) -> list[str]:
    return [n for n, _ in mc.A.odd_vars]


def sample_M(mc: MComplex, rng: random.Random) -> GradedElement:
    return random_element(
        mc.ring, rng, n_terms=rng.randint(1, 3), even=_A_even(mc) + [mc.t], odd=_A_odd(mc), u_range=(0, 2)
    )


def sample_At(mc: MComplex, rng: random.Random) -> GradedElement:
    """Random form on ``A[t]`` (``dt`` allowed)."""
    return random_element(
        mc.ring, rng, n_terms=rng.randint(1, 3), even=_A_even(mc) + [mc.t], u_range=(-1, 2)
    )


def sample_local(mc: MComplex, rng: random.Random, with_t: bool = True) -> GradedElement:
    ring = mc.local_ring
    even = _A_even(mc) + ([mc.t] if with_t else [])
    odd = _A_odd(mc) + (["d" + mc.t] if with_t else [])
    return random_element(
        ring, rng, n_terms=rng.randint(1, 3), even=even, odd=odd, u_range=(-1, 2), f_power=rng.randint(0, 2)
    )


def sample_A(mc: MComplex, rng: random.Random) -> GradedElement:
    return random_element(mc.ring, rng, n_terms=rng.randint(1, 3), even=_A_even(mc), odd=_A_odd(mc), u_range=(-1, 2))


def verify_keylemma(A: RingSpec, f, g=0, samples: int = 50, seed: int = 0, t: str = "t") -> list[Check]:
    """Replay the constituents of the homotopy-cartesian square on random samples.

    Covers contractibility of the localized deformation, the exact sequence built
    from ``nabla . t`` and ``phi``, and commutativity of the comparison diagram
    between ``HN(A[t], ft+g)``, ``fiber(nabla)`` and ``fiber(can_2)``.
    """
    mc = MComplex(A, f, g, t)
    rng = random.Random(seed)
    Ms = [sample_M(mc, rng) for _ in range(samples)]
    Ats = [sample_At(mc, rng) for _ in range(samples)]
    locals_ = [sample_local(mc, rng) for _ in range(samples)]
    targets = []
    for _ in range(samples):
        m = rng.randint(1, 3)
        targets.append((mc.local_ring.coerce(sample_A(mc, rng)) * mc.local_ring.inv_f(m), m))
    tvar = mc.ring.gen(t)
    fibers = [FiberElement(a, b) for a, b in zip(Ms, reversed(Ms))]

    checks = [
        ("M differential squares to zero", "M-complex", Ms, lambda m: not mc.D_M(mc.D_M(m))),
        ("nabla is a chain map", "nabla", Ms, lambda m: mc.D_M(mc.nabla(m)) == mc.nabla(mc.D_M(m))),
        ("phi is a chain map", "phi-chain-map", Ms, lambda m: mc.hn_Af(mc.phi(m)) == mc.phi(mc.D_M(m))),
        ("phi kills nabla.t", "phi-nabla-t", Ms, lambda m: not mc.phi(mc.nabla_t(m))),
        ("phi.nabla = -can.ev0", "comparison-square", Ms, lambda m: mc.phi(mc.nabla(m)) == -mc.can(mc.ev0(m))),
        ("ev0 kills t", "top-row-exact", Ms, lambda m: not mc.ev0(tvar * m)),
        ("preimage of nabla.t roundtrip", "phi-kernel-exact", Ms, lambda m: mc.preimage_nabla_t(mc.nabla_t(m)) == m),
        (
            "phi.phi_section = id",
            "phi-surjective-periodic",
            targets,
            lambda am: mc.phi(mc.phi_section(am[0], max(am[0].f_power, am[1]))) == am[0],
        ),
        (
            "contracting homotopy",
            "contracting-homotopy",
            locals_,
            lambda w: mc.hn_Aft(mc.contract(w)) + mc.contract(mc.hn_Aft(w)) == w,
        ),
        (
            "hbar is a homotopy for can.tau",
            "induced-homotopy",
            Ats,
            lambda w: mc.hn_Af(mc.h_bar(w)) + mc.h_bar(mc.hn_At(w)) == mc.can(mc.tau(w)),
        ),
        (
            "cone splitting intertwines differentials",
            "cone-iso",
            Ats,
            lambda w: mc.cone_iso(mc.hn_At(w)) == mc.fiber_nabla_d(mc.cone_iso(w)),
        ),
        (
            "fiber map is a chain map",
            "comparison-diagram",
            fibers,
            lambda x: mc.fiber_map(mc.fiber_nabla_d(x)) == mc.fiber_can2_d(mc.fiber_map(x)),
        ),
        ("sigma factors through fiber(nabla)", "comparison-diagram", Ats, lambda w: mc.fiber_map(mc.cone_iso(w)) == mc.sigma(w)),
        ("sigma is a chain map", "sigma", Ats, lambda w: mc.sigma(mc.hn_At(w)) == mc.fiber_can2_d(mc.sigma(w))),
        (
            "sigma sends cycles to cycles",
            "sigma",
            Ats,
            lambda w: mc.fiber_can2_d(mc.sigma(mc.hn_At(w), strict=True)).is_zero(),
        ),
    ]
    return [run_check(name, anchor, lambda items=items, p=p: first_failure(items, p)) for name, anchor, items, p in checks]
