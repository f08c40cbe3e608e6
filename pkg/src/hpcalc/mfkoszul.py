"""Matrix factorizations, Koszul complexes and their Chern characters.

A factorization ``(A, B)`` of ``f`` is stored 2-periodically; its Chern
characters live in the twisted de Rham complexes of ``Q[1/f]`` (odd class
``ch1``) and of ``Q[t]`` with potential ``ft`` (even class ``ch0``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, factorial
from typing import Sequence

from . import matrix as mx
from .boundary import BoundaryClass, boundary, deformation_ring, normalize_cycle
from .derham import dR
from .gca import GradedElement, RingSpec, form_ring, unit_inverse
from .report import Check, first_failure, run_check

__all__ = [
    "MatrixFactorization",
    "KoszulModule",
    "koszul_complex",
    "phi_koszul_dual",
    "canonical_contraction",
    "ch1_unit",
    "ch1_mf",
    "ch0_mf",
    "trace_identity_check",
    "truncation_bound",
    "square_classes",
    "verify_square",
    "mf_corpus",
]


@dataclass(frozen=True)
class MatrixFactorization:
    """Square matrices with ``AB = BA = potential * I``."""

    A: list
    B: list
    potential: GradedElement

    def __post_init__(self):
        ring = self.potential.ring
        A, B = mx.coerce(ring, self.A), mx.coerce(ring, self.B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        n = len(A)
        if mx.shape(A) != (n, n) or mx.shape(B) != (n, n):
            raise ValueError("A and B must be square of equal size")

    @property
    def ring(self) -> RingSpec:
        return self.potential.ring

    @property
    def n(self) -> int:
        return len(self.A)

    def check(self) -> bool:
        h = self.potential
        return mx.is_scalar(mx.matmul(self.A, self.B), h) and mx.is_scalar(mx.matmul(self.B, self.A), h)

    def differential(self) -> list:
        """The odd endomorphism ``[[0, A], [B, 0]]`` of ``P0 + P1``; it squares to ``h``."""
        z = mx.zeros(self.ring, self.n)
        return mx.block(z, self.A, self.B, z)


@dataclass(frozen=True)
class KoszulModule:
    """A free module with differential ``d`` and odd operators ``E_i`` (matrices)."""

    ring: RingSpec
    d: list
    E: tuple
    f: tuple
    degrees: tuple

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def relations(self) -> dict[str, bool]:
        ring, r = self.ring, self.rank
        zero = ring.zero
        out = {"d^2 = 0": mx.is_scalar(mx.matmul(self.d, self.d), zero)}
        ok_sq = ok_anti = ok_mixed = True
        for i, Ei in enumerate(self.E):
            ok_sq &= mx.is_scalar(mx.matmul(Ei, Ei), zero)
            for j in range(i + 1, len(self.E)):
                Ej = self.E[j]
                ok_anti &= mx.is_scalar(mx.matadd(mx.matmul(Ei, Ej), mx.matmul(Ej, Ei)), zero)
            ok_mixed &= mx.is_scalar(mx.matadd(mx.matmul(self.d, Ei), mx.matmul(Ei, self.d)), ring.coerce(self.f[i]))
        out["E_i^2 = 0"] = ok_sq
        out["E_i E_j + E_j E_i = 0"] = ok_anti
        out["d E_i + E_i d = f_i"] = ok_mixed
        if r == 0:
            return {k: True for k in out}
        return out

    def check(self) -> bool:
        return all(self.relations().values())


def koszul_complex(fs: Sequence[GradedElement]) -> KoszulModule:
    """The Koszul algebra on ``fs`` as a module over itself.

    Basis: increasing subsets ``I``, ordered by size; ``e_I`` has degree ``-|I|``.
    """
    if not fs:
        raise ValueError("need at least one element")
    ring = fs[0].ring
    fs = tuple(ring.coerce(f) for f in fs)
    for f in fs:
        if f and f.degree() != 0:
            raise ValueError("Koszul potentials must have degree 0")
    c = len(fs)
    basis = [I for k in range(c + 1) for I in combinations(range(c), k)]
    index = {I: n for n, I in enumerate(basis)}
    r = len(basis)
    d = mx.zeros(ring, r)
    for col, I in enumerate(basis):
        for m, i in enumerate(I):
            J = I[:m] + I[m + 1:]
            d[index[J]][col] = fs[i] if m % 2 == 0 else -fs[i]
    E = []
    for i in range(c):
        Ei = mx.zeros(ring, r)
        for col, I in enumerate(basis):
            if i in I:
                continue
            J = tuple(sorted(I + (i,)))
            sign = -1 if sum(1 for j in I if j < i) % 2 else 1
            Ei[index[J]][col] = ring.const(sign)
        E.append(Ei)
    return KoszulModule(ring, d, tuple(E), fs, tuple(-len(I) for I in basis))


def phi_koszul_dual(P: KoszulModule, tnames: Sequence[str] | None = None) -> MatrixFactorization:
    """``(P[t_1..t_c], d + sum E_i t_i)`` split into even and odd halves.

    ``A`` maps the odd half to the even half and ``B`` the reverse, so ``D^2 = ft I``
    amounts to ``AB = BA = ft`` with ``ft = sum f_i t_i``.
    """
    if not P.check():
        raise ValueError("Koszul module relations fail")
    c = len(P.f)
    tnames = list(tnames or [f"t{i + 1}" for i in range(c)])
    ring = P.ring.extend([(t, 2) for t in tnames])
    ts = [ring.gen(t) for t in tnames]
    D = mx.coerce(ring, P.d)
    for Ei, t in zip(P.E, ts):
        D = mx.matadd(D, mx.scale(mx.coerce(ring, Ei), t))
    ft = ring.zero
    for f, t in zip(P.f, ts):
        ft = ft + ring.coerce(f) * t
    if not mx.is_scalar(mx.matmul(D, D), ft):
        raise ValueError("D^2 differs from ft * I")
    even = [i for i, g in enumerate(P.degrees) if g % 2 == 0]
    odd = [i for i, g in enumerate(P.degrees) if g % 2]
    if len(even) != len(odd):
        raise ValueError("even and odd halves have different ranks")
    for part in (even, odd):
        if any(D[i][j] for i in part for j in part):
            raise ValueError("D is not odd")
    A = [[D[i][j] for j in odd] for i in even]
    B = [[D[i][j] for j in even] for i in odd]
    return MatrixFactorization(A, B, ft)


def canonical_contraction(mf: MatrixFactorization) -> list:
    """``H = D / 2h`` with ``DH + HD = I``; needs ``h`` invertible."""
    if not mf.potential:
        raise ValueError("potential 0 is not invertible")
    if mf.n == 0:
        return []
    hinv = unit_inverse(mf.potential)
    D = mf.differential()
    H = mx.scale(D, hinv * Fraction(1, 2))
    if not mx.is_scalar(mx.matadd(mx.matmul(D, H), mx.matmul(H, D)), mf.ring.one):
        raise ArithmeticError("DH + HD != I")
    return H


# -- Chern characters ----------------------------------------------------------------


def _form_base(ring: RingSpec) -> RingSpec:
    """Differential forms (u inverted, no denominator) on the even variables of ``ring``."""
    if ring.is_form_ring:
        return ring.base.with_u_inverted()
    return form_ring(list(ring.even_vars), u_inverted=True)


def truncation_bound(ring: RingSpec) -> int:
    """Largest ``s`` whose ``(2s-1)``-forms can be nonzero."""
    v = ring.num_degree_zero_vars
    return max(1, ceil((v + 1) / 2))


def _ch_setting(mf: MatrixFactorization):
    f = mf.potential
    if f.degree() not in (0, None):
        raise ValueError("Chern characters need a degree-0 potential")
    if not mf.check():
        raise ValueError("AB = BA = f I fails")
    Q = _form_base(mf.ring)
    A, B = mx.coerce(Q, mf.A), mx.coerce(Q, mf.B)
    return Q, A, B, Q.coerce(f)


def _series_coeff(s: int) -> Fraction:
    return Fraction((-1) ** (s + 1) * 2 * factorial(s), factorial(2 * s))


def _trace_words(Q: RingSpec, A: list, B: list, smax: int) -> dict[int, GradedElement]:
    """``s -> tr(B dA (dB dA)^(s-1))`` for ``1 <= s <= smax``."""
    dA, dB = mx.d_entries(A), mx.d_entries(B)
    step = mx.matmul(dB, dA)
    word = mx.matmul(B, dA)
    out = {}
    for s in range(1, smax + 1):
        out[s] = mx.trace(word, Q)
        word = mx.matmul(word, step)
    return out


def ch1_unit(T: list, ring: RingSpec | None = None) -> GradedElement:
    """``sum_s (-1)^(s+1) 2 s!/(2s)! tr(T^-1 dT (dT^-1 dT)^(s-1)) u^(s-1)``."""
    if not T:
        if ring is None:
            raise ValueError("empty matrix needs an explicit ring")
        return ring.zero
    ring = T[0][0].ring
    if not ring.is_form_ring:
        raise ValueError("T must have entries in a ring of forms")
    if not ring.u_inverted:
        ring = ring.with_u_inverted()
        T = mx.coerce(ring, T)
    Tinv = mx.inverse(T, ring)
    dT, dTinv = mx.d_entries(T), mx.d_entries(Tinv)
    step = mx.matmul(dTinv, dT)
    word = mx.matmul(Tinv, dT)
    total = ring.zero
    for s in range(1, truncation_bound(ring) + 1):
        tr = mx.trace(word, ring)
        if tr:
            total = total + (tr * _series_coeff(s)).shift_u(s - 1)
        word = mx.matmul(word, step)
    return total


def ch1_mf(mf: MatrixFactorization) -> GradedElement:
    """``sum_s (-1)^(s+1) 2 s!/(2s)! f^-s tr(B dA (dB dA)^(s-1)) u^(s-1)`` on ``Q[1/f]``."""
    Q, A, B, f = _ch_setting(mf)
    L = Q.localize(f)
    total = L.zero
    for s, tr in _trace_words(Q, A, B, truncation_bound(Q)).items():
        if tr:
            total = total + (L.coerce(tr) * L.inv_f(s) * _series_coeff(s)).shift_u(s - 1)
    return total


def ch0_mf(mf: MatrixFactorization, t: str = "t") -> GradedElement:
    """``-sum_s 2/(2s)! d(tr(B dA (dB dA)^(s-1)) t^s)`` on forms over ``Q[t]``.

    ``d`` is the full de Rham differential of ``Q[t]``, so it also hits ``t^s``.
    """
    Q, A, B, f = _ch_setting(mf)
    R = deformation_ring(Q, t)
    tv = R.gen(t)
    total = R.zero
    for s, tr in _trace_words(Q, A, B, truncation_bound(Q)).items():
        if tr:
            total = total - dR(R.coerce(tr) * tv ** s) * Fraction(2, factorial(2 * s))
    return total


def trace_identity_check(mf: MatrixFactorization, s: int) -> bool:
    """``f tr((dB dA)^s) == s df tr(B dA (dB dA)^(s-1))``."""
    if s < 1:
        raise ValueError("s must be positive")
    Q, A, B, f = _ch_setting(mf)
    step = mx.matmul(mx.d_entries(B), mx.d_entries(A))
    lhs = f * mx.trace(mx.matpow(step, s, Q), Q)
    rhs = dR(f) * _trace_words(Q, A, B, s)[s] * s
    return lhs == rhs


def square_classes(mf: MatrixFactorization) -> list[BoundaryClass]:
    """Normal form of ``ch1_mf`` as a list of boundary classes."""
    w = ch1_mf(mf)
    if not w:
        return []
    return normalize_cycle(w)


def verify_square(mf: MatrixFactorization, t: str = "t") -> list[Check]:
    """Check ``boundary(ch1) == ch0`` with the supporting identities itemized."""
    checks = [run_check("AB = BA = f I", "matrix-factorization", lambda: (mf.check(), None))]
    Q = _form_base(mf.ring)
    f = Q.coerce(mf.potential)
    smax = truncation_bound(Q)
    cache: dict = {}

    def ch1():
        if "ch1" not in cache:
            cache["ch1"] = ch1_mf(mf)
        return cache["ch1"]

    def classes():
        if "cls" not in cache:
            cache["cls"] = square_classes(mf)
        return cache["cls"]

    def unit_agreement():
        L = Q.localize(f)
        other = ch1_unit(mx.coerce(L, mf.A)) if mf.n else L.zero
        return other == ch1(), None if other == ch1() else f"{other} != {ch1()}"

    def cycle():
        w = dR(ch1())
        return not w, w

    def trace_identities():
        return first_failure(range(1, smax + 1), lambda s: trace_identity_check(mf, s))

    def class_invariants():
        ok, bad = first_failure(classes(), lambda c: c.satisfies_cycle_condition(f))
        return ok, None if ok else f"alpha={bad.alpha}, s={bad.s}, l={bad.l}"

    def square():
        R = deformation_ring(Q, t)
        lhs = R.zero
        for c in classes():
            lhs = lhs + boundary(c, f, t)
        rhs = ch0_mf(mf, t)
        return lhs == rhs, None if lhs == rhs else f"boundary(ch1) = {lhs}, ch0 = {rhs}"

    checks += [
        run_check("ch1 agrees with the unit formula for A", "chern-character", unit_agreement),
        run_check("ch1 is a cycle on Q[1/f]", "chern-character", cycle),
        run_check(f"trace identity for s <= {smax}", "chern-character", trace_identities),
        run_check("boundary classes satisfy the cycle condition", "cycle-normal-form", class_invariants),
        run_check("boundary(ch1) = ch0", "commuting-square", square),
    ]
    return checks


def mf_corpus() -> dict[str, MatrixFactorization]:
    """``(x^a, x^(n-a))`` of ``x^n`` for ``1 <= a < n <= 4`` and the rotation pair of ``x^2 + y^2``."""
    out = {}
    Qx = form_ring([("x", 0)])
    x = Qx.gen("x")
    for n in range(2, 5):
        for a in range(1, n):
            out[f"x^{a},x^{n - a}"] = MatrixFactorization([[x ** a]], [[x ** (n - a)]], x ** n)
    Qxy = form_ring([("x", 0), ("y", 0)])
    x, y = Qxy.gen("x"), Qxy.gen("y")
    out["rotation"] = MatrixFactorization([[x, -y], [y, x]], [[x, y], [-y, x]], x * x + y * y)
    return out
