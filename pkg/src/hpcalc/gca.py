"""Exact graded-commutative algebra over the rationals.

A ring is a polynomial algebra on even generators tensored with an exterior
algebra on odd generators, optionally adjoined a degree-2 variable ``u``
(possibly inverted) and localized at a single degree-0 polynomial ``f``.
Elements are stored as ``numerator / f**s`` with ``s`` minimal.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, NamedTuple, Union

__all__ = [
    "Monomial",
    "RingSpec",
    "GradedElement",
    "RingMismatch",
    "NotDivisible",
    "NonHomogeneous",
    "polynomial_ring",
    "form_ring",
    "mul",
    "degree",
    "partial_t",
    "substitute_zero",
    "divide_exact",
    "unit_inverse",
]

Scalar = Union[int, Fraction]


class RingMismatch(ValueError):
    """Operands live in different rings."""


class NotDivisible(ArithmeticError):
    """Exact division left a nonzero remainder."""


class NonHomogeneous(ValueError):
    """The terms of an element do not share a degree."""


class Monomial(NamedTuple):
    even: tuple[int, ...]
    odd: tuple[int, ...] = ()
    u: int = 0


@lru_cache(maxsize=65536)
def _merge_odd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[tuple[int, ...] | None, int]:
    # product of two sorted odd words; sign counts transpositions
    if not a:
        return b, 1
    if not b:
        return a, 1
    if set(a) & set(b):
        return None, 0
    inversions = 0
    for j in b:
        for i in a:
            if i > j:
                inversions += 1
    return tuple(sorted(a + b)), (-1 if inversions & 1 else 1)


def _grlex(e: tuple[int, ...]):
    return (sum(e), e)


def _divide_component(poly: dict, f_terms: tuple, lead: tuple[int, ...], lead_coeff: Fraction):
    """Divide a polynomial (exponent tuple -> coeff) by ``f``; None if not exact."""
    poly = dict(poly)
    quotient: dict = {}
    while poly:
        m = max(poly, key=_grlex)
        if any(mi < li for mi, li in zip(m, lead)):
            return None
        c = poly[m] / lead_coeff
        shift = tuple(mi - li for mi, li in zip(m, lead))
        quotient[shift] = quotient.get(shift, 0) + c
        for fe, fc in f_terms:
            key = tuple(a + b for a, b in zip(fe, shift))
            v = poly.get(key, 0) - c * fc
            if v:
                poly[key] = v
            else:
                poly.pop(key, None)
    return quotient


def _divide_terms(terms: Mapping[Monomial, Fraction], f_terms: tuple):
    """Exact division of a term map by an even polynomial, or None."""
    if not terms:
        return {}
    lead, lead_coeff = max(f_terms, key=lambda t: _grlex(t[0]))
    groups: dict[tuple, dict] = {}
    for m, c in terms.items():
        groups.setdefault((m.odd, m.u), {})[m.even] = c
    out: dict[Monomial, Fraction] = {}
    for (odd, u), poly in groups.items():
        q = _divide_component(poly, f_terms, lead, lead_coeff)
        if q is None:
            return None
        for e, c in q.items():
            if c:
                out[Monomial(e, odd, u)] = c
    return out


def _mul_terms(a: Mapping[Monomial, Fraction], b: Mapping[Monomial, Fraction]) -> dict:
    out: dict[Monomial, Fraction] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            odd, sign = _merge_odd(ma.odd, mb.odd)
            if odd is None:
                continue
            key = Monomial(tuple(x + y for x, y in zip(ma.even, mb.even)), odd, ma.u + mb.u)
            v = out.get(key, 0) + sign * ca * cb
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def _as_var_spec(v, default_degree: int) -> tuple[str, int]:
    if isinstance(v, str):
        return (v, default_degree)
    name, deg = v
    return (str(name), int(deg))


@dataclass(frozen=True)
class RingSpec:
    """Generators, degrees and localization data of a graded-commutative ring.

    ``partners[i]`` is the index of the odd generator ``d(even_vars[i])`` when the
    ring is a ring of differential forms, else ``None``.
    """

    even_vars: tuple[tuple[str, int], ...]
    odd_vars: tuple[tuple[str, int], ...] = ()
    u_enabled: bool = True
    u_inverted: bool = False
    denominator: tuple[tuple[tuple[int, ...], Fraction], ...] | None = None
    partners: tuple[int | None, ...] | None = None

    def __post_init__(self):
        names = [n for n, _ in self.even_vars] + [n for n, _ in self.odd_vars]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if self.u_enabled and "u" in names:
            raise ValueError("'u' is reserved")
        for n, d in self.even_vars:
            if d < 0 or d % 2:
                raise ValueError(f"even variable {n} has degree {d}")
        for n, d in self.odd_vars:
            if d % 2 == 0:
                raise ValueError(f"odd variable {n} has even degree {d}")
        if self.u_inverted and not self.u_enabled:
            raise ValueError("cannot invert a disabled u")
        if self.partners is not None:
            if len(self.partners) != len(self.even_vars):
                raise ValueError("partner table has the wrong length")
            for i, p in enumerate(self.partners):
                if p is not None and self.odd_vars[p][1] != self.even_vars[i][1] - 1:
                    raise ValueError("deg(dv) must equal deg(v) - 1")
        if self.denominator is not None:
            if not self.denominator:
                raise ValueError("denominator must be nonzero")
            for e, _ in self.denominator:
                for i, k in enumerate(e):
                    if k and self.even_vars[i][1] != 0:
                        raise ValueError("denominator must only involve degree-0 variables")

    # -- lookup ---------------------------------------------------------------
    @cached_property
    def _even_index(self) -> dict[str, int]:
        return {n: i for i, (n, _) in enumerate(self.even_vars)}

    @cached_property
    def _odd_index(self) -> dict[str, int]:
        return {n: i for i, (n, _) in enumerate(self.odd_vars)}

    @cached_property
    def _even_degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.even_vars)

    @cached_property
    def _odd_degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.odd_vars)

    @cached_property
    def _partner_of_odd(self) -> dict[int, int]:
        if self.partners is None:
            return {}
        return {p: i for i, p in enumerate(self.partners) if p is not None}

    def even_index(self, name: str) -> int:
        try:
            return self._even_index[name]
        except KeyError:
            raise KeyError(f"unknown even variable {name!r}") from None

    def odd_index(self, name: str) -> int:
        try:
            return self._odd_index[name]
        except KeyError:
            raise KeyError(f"unknown odd variable {name!r}") from None

    def partner(self, name_or_index) -> int | None:
        """Index of the odd partner ``dv`` of an even variable, if any."""
        i = self.even_index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return None if self.partners is None else self.partners[i]

    @property
    def is_form_ring(self) -> bool:
        return self.partners is not None and all(p is not None for p in self.partners)

    @property
    def is_localized(self) -> bool:
        return self.denominator is not None

    @cached_property
    def num_degree_zero_vars(self) -> int:
        return sum(1 for _, d in self.even_vars if d == 0)

    def names(self) -> list[str]:
        return [n for n, _ in self.even_vars] + [n for n, _ in self.odd_vars]

    # -- constructors ----------------------------------------------------------
    @cached_property
    def _zero_even(self) -> tuple[int, ...]:
        return (0,) * len(self.even_vars)

    def monomial(self, even: Mapping[str, int] | None = None, odd: Iterable[str] = (), u: int = 0) -> Monomial:
        e = list(self._zero_even)
        for n, k in (even or {}).items():
            e[self.even_index(n)] = k
        return Monomial(tuple(e), tuple(self.odd_index(n) for n in odd), u)

    def element(self, terms: Mapping[Monomial, Scalar] | None = None, f_power: int = 0) -> GradedElement:
        return GradedElement(self, terms or {}, f_power)

    @cached_property
    def zero(self) -> GradedElement:
        return GradedElement(self, {}, 0, _canonical=True)

    @cached_property
    def one(self) -> GradedElement:
        return self.const(1)

    def const(self, c: Scalar) -> GradedElement:
        c = Fraction(c)
        if not c:
            return self.zero
        return GradedElement(self, {Monomial(self._zero_even, (), 0): c}, 0, _canonical=True)

    def gen(self, name: str) -> GradedElement:
        """The generator called ``name`` (even, odd, or ``u``)."""
        if name == "u" and self.u_enabled:
            return self.u_power(1)
        if name in self._even_index:
            e = list(self._zero_even)
            e[self._even_index[name]] = 1
            return GradedElement(self, {Monomial(tuple(e), (), 0): Fraction(1)}, 0, _canonical=True)
        if name in self._odd_index:
            return GradedElement(
                self, {Monomial(self._zero_even, (self._odd_index[name],), 0): Fraction(1)}, 0, _canonical=True
            )
        raise KeyError(f"unknown variable {name!r}")

    def gens(self) -> dict[str, GradedElement]:
        out = {n: self.gen(n) for n in self.names()}
        if self.u_enabled:
            out["u"] = self.u_power(1)
        return out

    def u_power(self, k: int) -> GradedElement:
        if not self.u_enabled:
            raise ValueError("u is not part of this ring")
        if k < 0 and not self.u_inverted:
            raise ValueError("u is not inverted in this ring")
        return GradedElement(self, {Monomial(self._zero_even, (), k): Fraction(1)}, 0, _canonical=True)

    def d_of(self, name: str) -> GradedElement:
        """The odd partner ``dv`` of an even variable ``v``."""
        p = self.partner(name)
        if p is None:
            raise ValueError(f"{name} has no differential partner")
        return self.gen(self.odd_vars[p][0])

    # -- localization ------------------------------------------------------------
    @cached_property
    def _f_terms(self) -> tuple:
        if self.denominator is None:
            raise ValueError("ring is not localized")
        return self.denominator

    @cached_property
    def base(self) -> RingSpec:
        """The same ring without its denominator."""
        return replace(self, denominator=None)

    @cached_property
    def f(self) -> GradedElement:
        """The distinguished denominator, as an element with ``f_power == 0``."""
        return GradedElement(
            self, {Monomial(e, (), 0): c for e, c in self._f_terms}, 0, _canonical=True
        )

    def inv_f(self, k: int = 1) -> GradedElement:
        """``1 / f**k``."""
        if k == 0:
            return self.one
        return GradedElement(self, {Monomial(self._zero_even, (), 0): Fraction(1)}, k)

    def localize(self, f: GradedElement) -> RingSpec:
        """This ring with ``f`` inverted (``f`` a nonzero degree-0 polynomial)."""
        if f.f_power or not f.terms:
            raise ValueError("denominator must be a nonzero polynomial")
        for m in f.terms:
            if m.odd or m.u:
                raise ValueError("denominator must be an even polynomial without u")
            for i, k in enumerate(m.even):
                if k and self.even_vars[i][1] != 0:
                    raise ValueError("denominator must only involve degree-0 variables")
        f = self.base.coerce(f) if f.ring != self.base else f
        den = tuple(sorted(((m.even, c) for m, c in f.terms.items()), key=lambda t: _grlex(t[0])))
        return replace(self, denominator=den)

    def with_u_inverted(self) -> RingSpec:
        return replace(self, u_enabled=True, u_inverted=True)

    def extend(self, even: Iterable = (), odd: Iterable = ()) -> RingSpec:
        """Adjoin new generators; new even variables get ``d``-partners in a form ring."""
        even = [_as_var_spec(v, 0) for v in even]
        odd = [_as_var_spec(v, 1) for v in odd]
        even_vars = self.even_vars + tuple(even)
        odd_vars = list(self.odd_vars)
        partners = None if self.partners is None else list(self.partners)
        if partners is not None:
            for name, deg in even:
                partners.append(len(odd_vars))
                odd_vars.append(("d" + name, deg - 1))
        odd_vars.extend(odd)
        den = None
        if self.denominator is not None:
            pad = (0,) * len(even)
            den = tuple((e + pad, c) for e, c in self.denominator)
        return RingSpec(
            even_vars,
            tuple(odd_vars),
            self.u_enabled,
            self.u_inverted,
            den,
            None if partners is None else tuple(partners),
        )

    def coerce(self, a) -> GradedElement:
        """Map ``a`` into this ring, matching generators by name."""
        if isinstance(a, (int, Fraction)):
            return self.const(a)
        if a.ring == self:
            return a
        src = a.ring
        if a.f_power:
            if self.denominator is None or src.denominator is None:
                raise RingMismatch("element has a denominator this ring cannot hold")
            if self.base.coerce(src.base.coerce(src.f)) != self.base.coerce(self.f):
                raise RingMismatch("denominators differ")
        # only generators that actually occur need a counterpart here
        emap = [self._even_index.get(n) for n, _ in src.even_vars]
        omap = [self._odd_index.get(n) for n, _ in src.odd_vars]
        n_even = len(self.even_vars)
        terms: dict[Monomial, Fraction] = {}
        for m, c in a.terms.items():
            if m.u and not self.u_enabled:
                raise RingMismatch("target ring has no u")
            if m.u < 0 and not self.u_inverted:
                raise RingMismatch("target ring does not invert u")
            e = [0] * n_even
            for i, k in enumerate(m.even):
                if k:
                    if emap[i] is None:
                        raise RingMismatch(f"variable {src.even_vars[i][0]} missing from target ring")
                    e[emap[i]] = k
            if any(omap[i] is None for i in m.odd):
                missing = next(src.odd_vars[i][0] for i in m.odd if omap[i] is None)
                raise RingMismatch(f"variable {missing} missing from target ring")
            odd_idx = [omap[i] for i in m.odd]
            odd, sign = tuple(sorted(odd_idx)), _perm_sign(odd_idx)
            terms[Monomial(tuple(e), odd, m.u)] = sign * c
        return GradedElement(self, terms, a.f_power)


def _perm_sign(seq: list[int]) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv & 1 else 1


def polynomial_ring(even, odd=(), *, u: bool = True, u_inverted: bool = False) -> RingSpec:
    """Polynomial ring on ``even`` (names or ``(name, degree)``) with exterior ``odd`` generators."""
    return RingSpec(
        tuple(_as_var_spec(v, 0) for v in even),
        tuple(_as_var_spec(v, 1) for v in odd),
        u,
        u_inverted,
    )


def form_ring(even, *, u: bool = True, u_inverted: bool = False) -> RingSpec:
    """Kähler forms on a polynomial ring: each ``v`` gets an odd partner ``dv``."""
    even = tuple(_as_var_spec(v, 0) for v in even)
    odd = tuple(("d" + n, d - 1) for n, d in even)
    return RingSpec(even, odd, u, u_inverted, None, tuple(range(len(even))))


class GradedElement:
    """An element ``sum(c * m) / f**f_power`` kept in canonical form."""

    __slots__ = ("ring", "terms", "f_power", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping[Monomial, Scalar], f_power: int = 0, *, _canonical: bool = False):
        self.ring = ring
        self._hash = None
        if _canonical:
            self.terms = terms
            self.f_power = f_power
            return
        clean = {m: Fraction(c) for m, c in terms.items() if c}
        if f_power < 0:
            raise ValueError("f_power must be nonnegative")
        if f_power and ring.denominator is None:
            raise ValueError("ring has no denominator")
        while f_power and clean:
            q = _divide_terms(clean, ring._f_terms)
            if q is None:
                break
            clean = q
            f_power -= 1
        if not clean:
            f_power = 0
        self.terms = clean
        self.f_power = f_power

    # -- basics ------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.ring == other.ring and self.f_power == other.f_power and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.f_power, frozenset(self.terms.items())))
        return self._hash

    def _lift(self, other) -> GradedElement:
        if isinstance(other, GradedElement):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch("operands belong to different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def numerator(self) -> GradedElement:
        return GradedElement(self.ring, self.terms, 0, _canonical=True)

    def _scaled_numerator(self, s: int) -> dict:
        """Numerator when written over ``f**s`` (``s >= f_power``)."""
        if s == self.f_power:
            return dict(self.terms)
        return _mul_terms(self.terms, _f_power_terms(self.ring, s - self.f_power))

    # -- arithmetic --------------------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        s = max(self.f_power, other.f_power)
        a = self._scaled_numerator(s)
        for m, c in other._scaled_numerator(s).items():
            v = a.get(m, 0) + c
            if v:
                a[m] = v
            else:
                a.pop(m, None)
        if s == 0:
            return GradedElement(self.ring, a, 0, _canonical=True)
        return GradedElement(self.ring, a, s)

    __radd__ = __add__

    def __neg__(self):
        return GradedElement(self.ring, {m: -c for m, c in self.terms.items()}, self.f_power, _canonical=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero
            c = Fraction(other)
            return GradedElement(self.ring, {m: c * v for m, v in self.terms.items()}, self.f_power, _canonical=True)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        terms = _mul_terms(self.terms, other.terms)
        s = self.f_power + other.f_power
        if s == 0:
            return GradedElement(self.ring, terms, 0, _canonical=True)
        return GradedElement(self.ring, terms, s)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * unit_inverse(self._lift(other))

    def __pow__(self, k: int):
        if k < 0:
            return unit_inverse(self) ** (-k)
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift_u(self, k: int) -> GradedElement:
        """Multiply by ``u**k`` (cheap path)."""
        if k == 0:
            return self
        if not self.ring.u_enabled:
            raise ValueError("u is not part of this ring")
        terms = {Monomial(m.even, m.odd, m.u + k): c for m, c in self.terms.items()}
        if not self.ring.u_inverted and any(m.u < 0 for m in terms):
            raise ValueError("negative power of u in a ring where u is not inverted")
        return GradedElement(self.ring, terms, self.f_power, _canonical=True)

    # -- structure ------------------------------------------------------------------------
    def term_degree(self, m: Monomial) -> int:
        r = self.ring
        return (
            sum(k * d for k, d in zip(m.even, r._even_degrees))
            + sum(r._odd_degrees[i] for i in m.odd)
            + 2 * m.u
        )

    def degree(self) -> int | None:
        """Common degree of all terms; ``None`` for zero."""
        degs = {self.term_degree(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise NonHomogeneous(f"terms have degrees {sorted(degs)}")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return len({self.term_degree(m) for m in self.terms}) <= 1

    def homogeneous_parts(self) -> dict[int, GradedElement]:
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.term_degree(m), {})[m] = c
        return {d: GradedElement(self.ring, t, self.f_power) for d, t in sorted(parts.items())}

    def uses_var(self, name: str) -> bool:
        r = self.ring
        if name in r._even_index:
            i = r._even_index[name]
            return any(m.even[i] for m in self.terms)
        i = r.odd_index(name)
        return any(i in m.odd for m in self.terms)

    def max_u(self) -> int:
        return max((m.u for m in self.terms), default=0)

    def min_u(self) -> int:
        return min((m.u for m in self.terms), default=0)

    def is_constant(self) -> bool:
        return self.f_power == 0 and all(not any(m.even) and not m.odd and not m.u for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("element is not a constant")
        return next(iter(self.terms.values()))

    def __repr__(self):
        return f"GradedElement({self})"

    def __str__(self):
        return format_element(self)


@lru_cache(maxsize=256)
def _f_power_terms(ring: RingSpec, k: int) -> dict:
    terms = {Monomial(ring._zero_even, (), 0): Fraction(1)}
    f = ring.f.terms
    for _ in range(k):
        terms = _mul_terms(terms, f)
    return terms


# -- printing --------------------------------------------------------------------------------

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _monomial_key(ring: RingSpec, m: Monomial):
    deg = sum(k * max(d, 1) for k, d in zip(m.even, ring._even_degrees))
    return (-deg, tuple(-k for k in m.even), len(m.odd), m.odd, -m.u)


def _format_terms(ring: RingSpec, terms: Mapping[Monomial, Fraction]) -> str:
    if not terms:
        return "0"
    pieces = []
    for m in sorted(terms, key=lambda m: _monomial_key(ring, m)):
        c = terms[m]
        factors = []
        for (name, _), k in zip(ring.even_vars, m.even):
            if k == 1:
                factors.append(name)
            elif k:
                factors.append(f"{name}^{k}")
        factors.extend(ring.odd_vars[i][0] for i in m.odd)
        if m.u == 1:
            factors.append("u")
        elif m.u:
            factors.append(f"u^{m.u}")
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(mag) + "*" + "*".join(factors)
        pieces.append(("-" if c < 0 else "+", body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def format_element(a: GradedElement, denominator_name: str | None = None) -> str:
    """Canonical, re-parseable text for ``a``.

    Denominators print as ``inv(F)^s`` where ``F`` is ``denominator_name`` or the
    printed denominator polynomial.
    """
    num = _format_terms(a.ring, a.terms)
    if not a.f_power:
        return num
    fname = denominator_name or _format_terms(a.ring, {Monomial(e, (), 0): c for e, c in a.ring._f_terms})
    inv = f"inv({fname})"
    if a.f_power > 1:
        inv += f"^{a.f_power}"
    if len(a.terms) > 1:
        num = f"({num})"
    if num == "1":
        return inv
    if num == "-1":
        return "-" + inv
    return f"{num}*{inv}"


# -- module-level operations ---------------------------------------------------------------------

def mul(a: GradedElement, b: GradedElement) -> GradedElement:
    """Graded-commutative product."""
    if a.ring != b.ring:
        raise RingMismatch("operands belong to different rings")
    return a * b


def degree(a: GradedElement) -> int | None:
    return a.degree()


def _partial_numerator(ring: RingSpec, terms: Mapping[Monomial, Fraction], i: int) -> dict:
    out: dict[Monomial, Fraction] = {}
    for m, c in terms.items():
        k = m.even[i]
        if not k:
            continue
        e = list(m.even)
        e[i] = k - 1
        key = Monomial(tuple(e), m.odd, m.u)
        out[key] = out.get(key, 0) + k * c
    return {m: c for m, c in out.items() if c}


def partial_t(a: GradedElement, v: str) -> GradedElement:
    """Formal partial derivative with respect to the even variable ``v``."""
    ring = a.ring
    i = ring.even_index(v)
    num = GradedElement(ring, _partial_numerator(ring, a.terms, i), 0, _canonical=True)
    if not a.f_power or not any(e[i] for e, _ in ring._f_terms):
        return GradedElement(ring, num.terms, a.f_power)
    # quotient rule: d(N/f^s) = dN/f^s - s N df / f^(s+1)
    df = GradedElement(ring, _partial_numerator(ring, ring.f.terms, i), 0, _canonical=True)
    s = a.f_power
    top = num * ring.f - a.numerator() * df * s
    return GradedElement(ring, top.terms, s + 1)


def substitute_zero(a: GradedElement, names: Iterable[str]) -> GradedElement:
    """Set the listed even variables, and their odd partners, to zero."""
    ring = a.ring
    even_idx = set()
    odd_idx = set()
    for n in names:
        if n in ring._even_index:
            i = ring._even_index[n]
            if ring.denominator is not None and any(e[i] for e, _ in ring._f_terms):
                raise ValueError(f"{n} occurs in the denominator")
            even_idx.add(i)
            p = ring.partner(i)
            if p is not None:
                odd_idx.add(p)
        else:
            odd_idx.add(ring.odd_index(n))
    terms = {
        m: c
        for m, c in a.terms.items()
        if not any(m.even[i] for i in even_idx) and not odd_idx.intersection(m.odd)
    }
    return GradedElement(ring, terms, a.f_power)


def divide_exact(a: GradedElement, f: GradedElement) -> GradedElement:
    """``q`` with ``q * f == a`` for an even degree-0 polynomial ``f``.

    Division by a single polynomial under graded-lex order decides membership in
    the principal ideal ``(f)``, so a nonzero remainder means no quotient exists.
    """
    if not f.terms:
        raise ZeroDivisionError("division by zero")
    if f.ring != a.ring:
        f = a.ring.coerce(f)
    if f.f_power:
        raise ValueError("divisor must be a polynomial")
    f_terms = []
    for m, c in f.terms.items():
        if m.odd or m.u:
            raise ValueError("divisor must be an even polynomial without u")
        f_terms.append((m.even, c))
    q = _divide_terms(a.terms, tuple(f_terms))
    if q is None:
        raise NotDivisible(f"{f} does not divide {a.numerator()}")
    return GradedElement(a.ring, q, a.f_power)


def unit_inverse(a: GradedElement) -> GradedElement:
    """Inverse of a unit ``c * u**l * N / f**s`` where ``N`` divides a power of ``f``."""
    ring = a.ring
    if not a.terms:
        raise ZeroDivisionError("zero is not invertible")
    us = {m.u for m in a.terms}
    if len(us) != 1 or any(m.odd for m in a.terms):
        raise ValueError(f"{a} is not a unit")
    l = us.pop()
    if l and not ring.u_inverted:
        raise ValueError(f"{a} is not a unit")
    num = tuple((m.even, c) for m, c in a.terms.items())
    if len(num) == 1 and not any(num[0][0]):
        inv = GradedElement(ring, {Monomial(num[0][0], (), -l): 1 / num[0][1]}, 0, _canonical=True)
        return inv * ring.f ** a.f_power if a.f_power else inv
    if ring.denominator is None:
        raise ValueError(f"{a} is not a unit")
    # N | f^k forces every factor of N to divide f, so k <= deg N suffices
    bound = max(sum(e) for e, _ in num)
    for k in range(1, bound + 1):
        q = _divide_terms(_f_power_terms(ring, k), num)
        if q is not None:
            # a^-1 = u^-l f^s / N = u^-l f^s q / f^k
            inv = GradedElement(ring, {Monomial(m.even, (), -l): c for m, c in q.items()}, k)
            return inv * ring.f ** a.f_power if a.f_power else inv
    raise ValueError(f"{a} is not a unit")
