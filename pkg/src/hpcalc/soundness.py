"""Seeded self-checks of the graded algebra and the de Rham differential."""
from __future__ import annotations

import random

from .derham import TwistedComplex, dR
from .gca import GradedElement, RingSpec
from .report import Check, first_failure, run_check
from .sampling import random_element

__all__ = ["verify_core", "default_potential"]


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def default_potential(ring: RingSpec, f=None) -> GradedElement:
    """A degree-2 potential for the ``D^2 = 0`` check: ``f*u`` or ``(sum of vars)*u``."""
    if f is None:
        f = ring.zero
        for n, deg in ring.even_vars:
            if deg == 0:
                f = f + ring.gen(n)
    return ring.coerce(f).shift_u(1) if f else ring.zero


def verify_core(ring: RingSpec, potential=None, samples: int = 200, seed: int = 0) -> list[Check]:
    """``d d = 0``, ``D^2 = 0``, graded Leibniz and graded commutativity on samples.

    Elements are homogeneous with exponents at most 4 and ``u``-powers in
    ``-1..1`` (``0..1`` when ``u`` is not inverted).
    """
    rng = random.Random(seed)
    lo = -1 if ring.u_inverted else 0
    fp = (0, 1, 2) if ring.is_localized else (0,)

    def sample():
        return random_element(ring, rng, homogeneous=True, f_power=rng.choice(fp), u_range=(lo, 1))

    xs = [sample() for _ in range(samples)]
    pairs = [(sample(), sample()) for _ in range(samples)]
    h = default_potential(ring) if potential is None else ring.coerce(potential)
    checks = [
        run_check(
            "graded commutativity",
            "graded-algebra",
            lambda: first_failure(pairs, lambda p: p[0] * p[1] == p[1] * p[0] * _sign(_deg(p[0]) * _deg(p[1]))),
        ),
        run_check(
            "associativity",
            "graded-algebra",
            lambda: first_failure(zip(xs, pairs), lambda q: (q[0] * q[1][0]) * q[1][1] == q[0] * (q[1][0] * q[1][1])),
        ),
    ]
    if not ring.is_form_ring:
        return checks
    checks += [
        run_check("d d = 0", "de-rham", lambda: first_failure(xs, lambda a: not dR(dR(a)))),
        run_check(
            "graded Leibniz rule",
            "de-rham",
            lambda: first_failure(pairs, lambda p: dR(p[0] * p[1]) == dR(p[0]) * p[1] + p[0] * dR(p[1]) * _sign(_deg(p[0]))),
        ),
    ]
    if ring.u_inverted:
        D = TwistedComplex(ring, h)
        checks.append(run_check("D^2 = 0", "twisted-de-rham", lambda: first_failure(xs, lambda a: not D(D(a)))))
    return checks


def _deg(a: GradedElement) -> int:
    d = a.degree()
    return 0 if d is None else d
