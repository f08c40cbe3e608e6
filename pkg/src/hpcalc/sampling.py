"""Seeded random elements for property checks.

Monomials are drawn uniformly with exponents at most ``max_exp`` and
coefficients in ``-3..3``.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .gca import GradedElement, Monomial, RingSpec


def random_monomial(
    ring: RingSpec,
    rng: random.Random,
    *,
    even: Sequence[str] | None = None,
    odd: Sequence[str] | None = None,
    max_exp: int = 4,
    u_range: tuple[int, int] = (0, 0),
    odd_prob: float = 0.5,
) -> Monomial:
    even = [n for n, _ in ring.even_vars] if even is None else even
    odd = [n for n, _ in ring.odd_vars] if odd is None else odd
    e = [0] * len(ring.even_vars)
    for n in even:
        e[ring.even_index(n)] = rng.randint(0, max_exp)
    chosen = sorted(ring.odd_index(n) for n in odd if rng.random() < odd_prob)
    u = rng.randint(*u_range) if ring.u_enabled else 0
    return Monomial(tuple(e), tuple(chosen), u)


def random_element(
    ring: RingSpec,
    rng: random.Random,
    *,
    n_terms: int = 3,
    f_power: int = 0,
    homogeneous: bool = False,
    **kwargs,
) -> GradedElement:
    """Random element; with ``homogeneous`` all terms share the degree of the first."""
    terms: dict[Monomial, Fraction] = {}
    target = None
    attempts = 0
    while len(terms) < n_terms and attempts < 50 * n_terms:
        attempts += 1
        m = random_monomial(ring, rng, **kwargs)
        if homogeneous:
            deg = GradedElement(ring, {}, 0, _canonical=True).term_degree(m)
            if target is None:
                target = deg
            elif deg != target:
                continue
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        terms[m] = terms.get(m, 0) + c
    return GradedElement(ring, terms, f_power)
