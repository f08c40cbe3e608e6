"""De Rham differential and the twisted complexes ``(Omega[u], dh + u d)``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .gca import GradedElement, Monomial, RingSpec, _merge_odd

__all__ = ["dR", "TwistedComplex", "apply_D", "is_cycle"]


def _d_numerator(ring: RingSpec, terms, skip: frozenset[int]) -> dict:
    out: dict[Monomial, Fraction] = {}
    for m, c in terms.items():
        for i, k in enumerate(m.even):
            if not k or i in skip:
                continue
            p = ring.partners[i] if ring.partners is not None else None
            if p is None:
                raise ValueError(f"{ring.even_vars[i][0]} has no differential partner")
            # d(x^k) = k x^(k-1) dx, with dx moved into the odd word from the left
            odd, sign = _merge_odd((p,), m.odd)
            if odd is None:
                continue
            e = list(m.even)
            e[i] = k - 1
            key = Monomial(tuple(e), odd, m.u)
            v = out.get(key, 0) + sign * k * c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def dR(a: GradedElement, constants: Iterable[str] = ()) -> GradedElement:
    """De Rham differential, an odd derivation of degree -1.

    Even variables named in ``constants`` are treated as scalars (so ``dR(a, ["t"])``
    is the differential of ``Omega_A[t]`` relative to ``t``). ``u`` is always constant.
    """
    ring = a.ring
    skip = frozenset(ring.even_index(n) for n in constants)
    num = GradedElement(ring, _d_numerator(ring, a.terms, skip), 0, _canonical=True)
    s = a.f_power
    if not s:
        return num
    # d(N f^-s) = dN f^-s - s f^-(s+1) df N
    df = GradedElement(ring, _d_numerator(ring, ring.f.terms, skip), 0, _canonical=True)
    top = num * ring.f - (df * a.numerator()) * s
    return GradedElement(ring, top.terms, s + 1)


@dataclass(frozen=True)
class TwistedComplex:
    """Forms on ``ring`` with differential ``D = dR(h) * - + u dR``.

    ``periodic`` marks the u-inverted version; it requires a ring with ``u`` inverted.
    """

    ring: RingSpec
    potential: GradedElement
    periodic: bool = True

    def __post_init__(self):
        if not self.ring.is_form_ring:
            raise ValueError("twisted complexes need a ring of differential forms")
        if self.periodic and not self.ring.u_inverted:
            raise ValueError("periodic complex needs u inverted")
        h = self.ring.coerce(self.potential)
        object.__setattr__(self, "potential", h)
        if h and h.degree() != 2:
            raise ValueError(f"potential must have degree 2, got {h.degree()}")
        object.__setattr__(self, "_dh", dR(h))

    @property
    def dh(self) -> GradedElement:
        return self._dh

    def __call__(self, a: GradedElement) -> GradedElement:
        a = self.ring.coerce(a)
        return self._dh * a + dR(a).shift_u(1)


def apply_D(c: TwistedComplex, a: GradedElement) -> GradedElement:
    return c(a)


def is_cycle(c: TwistedComplex, a: GradedElement) -> bool:
    return not c(a)
