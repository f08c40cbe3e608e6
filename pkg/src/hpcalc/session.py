"""Elaborate a parsed command file and run its commands.

Elaboration resolves every name and evaluates every expression before any
command runs, so input errors surface with a position and nothing executes.
Command failures are recorded as checks and never stop later commands.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import lang
from .boundary import BoundaryClass, boundary, verify_boundary_via_fiber
from .derham import TwistedComplex, dR
from .gca import GradedElement, RingSpec, form_ring, unit_inverse
from .linhom import truncated_koszul_homology
from .matrix import format_matrix
from .mfkoszul import MatrixFactorization, ch0_mf, ch1_mf, koszul_complex, phi_koszul_dual, verify_square
from .report import Check, run_check
from .section3 import verify_keylemma
from .soundness import verify_core

__all__ = ["SessionError", "Env", "elaborate", "run", "RunResult"]


class SessionError(ValueError):
    """An input error tied to a source position."""

    def __init__(self, message: str, pos: tuple):
        line, col = pos
        super().__init__(f"{line}:{col}: {message}")
        self.message, self.line, self.col = message, line, col


@dataclass
class Env:
    ring: RingSpec | None = None
    ring_name: str = ""
    values: dict = field(default_factory=dict)
    potential: GradedElement | None = None
    gpart: GradedElement | None = None
    mfs: dict = field(default_factory=dict)
    classes: dict = field(default_factory=dict)  # name -> (BoundaryClass, f)
    jobs: list = field(default_factory=list)  # (statement, prepared arguments)

    @property
    def local(self) -> RingSpec:
        return self.ring.localize(self.potential)

    def lift(self, a: GradedElement) -> GradedElement:
        if a.ring.is_localized:
            if self.potential is None:
                raise ValueError("no potential declared")
            return self.local.coerce(a)
        return self.ring.coerce(a)

    def unify(self, a: GradedElement, b: GradedElement) -> tuple[GradedElement, GradedElement]:
        a, b = self.lift(a), self.lift(b)
        if a.ring != b.ring:
            a, b = self.local.coerce(a), self.local.coerce(b)
        return a, b


def _fail(msg: str, node) -> SessionError:
    return SessionError(msg, getattr(node, "pos", (0, 0)))


def evaluate(env: Env, e) -> GradedElement:
    """Evaluate an expression in the session ring (or its localization)."""
    if env.ring is None:
        raise _fail("no ring declared", e)
    if isinstance(e, lang.Num):
        return env.ring.const(e.value)
    if isinstance(e, lang.Var):
        if e.name == "u":
            return env.ring.u_power(1)
        if e.name in env.values:
            try:
                return env.lift(env.values[e.name])
            except ValueError as exc:
                raise _fail(f"{e.name}: {exc}", e) from None
        try:
            return env.ring.gen(e.name)
        except KeyError:
            raise _fail(f"{e.name!r} used before declaration", e) from None
    if isinstance(e, lang.Neg):
        return -evaluate(env, e.arg)
    if isinstance(e, lang.BinOp):
        left, right = evaluate(env, e.left), evaluate(env, e.right)
        try:
            a, b = env.unify(left, right)
        except ValueError as exc:
            raise _fail(str(exc), e) from None
        return a + b if e.op == "+" else a - b if e.op == "-" else a * b
    if isinstance(e, lang.Pow):
        base = evaluate(env, e.base)
        k = evaluate(env, e.exp)
        if not (k.is_constant() and k.constant_value().denominator == 1):
            raise _fail("exponent must be an integer", e.exp)
        try:
            return base ** int(k.constant_value())
        except (ValueError, ZeroDivisionError) as exc:
            raise _fail(str(exc), e) from None
    if isinstance(e, lang.Call):
        a = evaluate(env, e.arg)
        if e.fn == "d":
            return dR(a)
        if env.potential is None:
            raise _fail("inv() needs a declared potential", e)
        try:
            return unit_inverse(env.local.coerce(a))
        except ValueError as exc:
            raise _fail(f"inv: {exc}", e) from None
    if isinstance(e, lang.MatrixLit):
        raise _fail("a matrix is not allowed here", e)
    raise TypeError(e)


def _matrix(env: Env, m: lang.MatrixLit) -> list:
    return [[evaluate(env, x) for x in row] for row in m.rows]


def _need(env: Env, cond: bool, msg: str, st: lang.Statement):
    if not cond:
        raise SessionError(msg, st.pos)


def _degree_zero_poly(a: GradedElement) -> bool:
    return not a.f_power and a.is_homogeneous() and a.degree() in (0, None) and not any(m.odd or m.u for m in a.terms)


def elaborate(session: lang.Session) -> Env:
    env = Env()
    for st in session.statements:
        k = st.kind
        if k != "ring":
            _need(env, env.ring is not None, "the first statement must declare a ring", st)
        if k == "ring":
            _need(env, env.ring is None, "ring declared twice", st)
            names = st.get("vars")
            _need(env, len(set(names)) == len(names) and "u" not in names, "invalid variable list", st)
            env.ring = form_ring([(n, 0) for n in names], u_inverted=True)
            env.ring_name = st.name
        elif k == "evenvar":
            deg = st.get("deg")
            _need(env, deg % 2 == 0, "even variables need an even degree", st)
            _need(env, st.name not in env.ring.names() and st.name != "u", f"{st.name} already declared", st)
            env.ring = env.ring.extend([(st.name, deg)])
        elif k in ("potential", "gpart", "elem"):
            v = evaluate(env, st.get("value"))
            if k == "potential":
                _need(env, bool(v) and _degree_zero_poly(v), "potential must be a nonzero degree-0 polynomial", st)
                env.potential = v
            elif k == "gpart":
                _need(env, not v.f_power and v.degree() in (2, None), "gpart must be a polynomial of degree 2", st)
                env.gpart = v
            env.values[st.name] = v
        elif k == "mf":
            A, B = _matrix(env, st.get("A")), _matrix(env, st.get("B"))
            pot = evaluate(env, st.get("pot"))
            _need(env, _degree_zero_poly(pot), "mf potential must be a degree-0 polynomial", st)
            try:
                env.mfs[st.name] = MatrixFactorization(A, B, pot)
            except ValueError as exc:
                raise SessionError(str(exc), st.pos) from None
        elif k == "class":
            alpha = evaluate(env, st.get("alpha"))
            _need(env, env.potential is not None, "a class needs a declared potential", st)
            _need(env, not alpha.f_power and not any(m.u for m in alpha.terms), "alpha must be a polynomial form without u", st)
            _need(env, st.get("s") >= 0, "s must be nonnegative", st)
            env.classes[st.name] = (BoundaryClass(alpha, st.get("s"), st.get("l")), env.potential)
        elif k in ("boundary",):
            ref = st.args[0]
            if ref.name not in env.classes:
                raise _fail(f"unknown class {ref.name!r}", ref)
            env.jobs.append((st, env.classes[ref.name]))
        elif k in ("chern1", "chern0", "verify-square"):
            ref = st.args[0]
            if ref.name not in env.mfs:
                raise _fail(f"unknown matrix factorization {ref.name!r}", ref)
            env.jobs.append((st, env.mfs[ref.name]))
        elif k in ("koszul-dualize", "koszul-homology"):
            P = form_ring([(n, 0) for n, d in env.ring.even_vars if d == 0])
            fs = []
            for a in st.args:
                v = evaluate(env, a)
                try:
                    v = P.coerce(v)
                except ValueError:
                    raise _fail("Koszul entries must be polynomials in the degree-0 variables", a) from None
                if not _degree_zero_poly(v):
                    raise _fail("Koszul entries must be polynomials in the degree-0 variables", a)
                fs.append(v)
            if k == "koszul-homology":
                _need(env, st.get("N") >= 0, "truncation degree must be nonnegative", st)
            env.jobs.append((st, fs))
        elif k == "check-keylemma":
            _need(env, env.potential is not None, "check-keylemma needs a potential", st)
            env.jobs.append((st, (env.ring, env.potential, env.gpart or 0)))
        elif k == "check-core":
            env.jobs.append((st, env.ring))
    return env


@dataclass
class RunResult:
    checks: list
    lines: list

    @property
    def exit_code(self) -> int:
        return 0 if all(c.passed for c in self.checks) else 1


def _value_check(name: str, anchor: str, compute: Callable[[], tuple[object, bool]], lines: list) -> Check:
    """Record a computed value; the check fails if its sanity test does."""
    out: dict = {}

    def fn():
        value, ok = compute()
        out["v"] = value
        return ok, value

    c = run_check(name, anchor, fn)
    lines.append(f"{name}: {out['v'] if 'v' in out else c.witness}")
    return c


def _free_name(ring: RingSpec, base: str = "t") -> str:
    name, k = base, 0
    while name in ring.names():
        k += 1
        name = f"{base}{k}_"
    return name


def run(env: Env, *, seed: int = 0, samples: int = 100, strict: bool = False) -> RunResult:
    checks: list[Check] = []
    lines: list[str] = []

    def add(cs, prefix: str):
        for c in cs:
            c.name = f"{prefix}: {c.name}"
            checks.append(c)

    for st, arg in env.jobs:
        k = st.kind
        label = lang.print_statement(st)
        try:
            if k == "check-core":
                ring = arg
                h = env.gpart if env.gpart else None
                add(verify_core(ring, h, samples, seed), label)
                if env.potential is not None:
                    L = ring.localize(env.potential)
                    add(verify_core(L, env.potential.shift_u(1), samples, seed), label + " [localized]")
            elif k == "check-keylemma":
                A, f, g = arg
                add(verify_keylemma(A, f, g, samples, seed, _free_name(A)), label)
            elif k == "boundary":
                c, f = arg

                def compute(c=c, f=f):
                    gamma = boundary(c, f)
                    D = TwistedComplex(gamma.ring, gamma.ring.coerce(f) * gamma.ring.gen("t"))
                    return gamma, not D(gamma)

                checks.append(_value_check(label, "boundary-formula", compute, lines))
                add(verify_boundary_via_fiber(c, f, strict=strict), label)
            elif k == "chern1":
                mf = arg
                checks.append(_value_check(label, "chern-character", lambda mf=mf: _cycle1(ch1_mf(mf)), lines))
            elif k == "chern0":
                mf = arg
                checks.append(_value_check(label, "chern-character", lambda mf=mf: _cycle0(ch0_mf(mf), mf), lines))
            elif k == "verify-square":
                add(verify_square(arg), label)
            elif k == "koszul-dualize":
                fs = arg

                def compute(fs=fs):
                    mf = phi_koszul_dual(koszul_complex(fs))
                    text = f"A = {format_matrix(mf.A)} B = {format_matrix(mf.B)} pot = {mf.potential}"
                    return text, mf.check()

                checks.append(_value_check(label, "koszul-duality", compute, lines))
            elif k == "koszul-homology":
                fs, N = arg, st.get("N")

                def compute(fs=fs, N=N):
                    dims = truncated_koszul_homology(fs, N)
                    regular = all(v == 0 for p, v in dims.items() if p != 0)
                    text = " ".join(f"H[{p}]={v}" for p, v in sorted(dims.items()))
                    return f"{text} ({'regular' if regular else 'not regular'})", True

                checks.append(_value_check(label, "regular-sequence", compute, lines))
        except Exception as exc:  # keep running later commands
            checks.append(Check(label, "session", "error", f"{type(exc).__name__}: {exc}"))
    return RunResult(checks, lines)


def _cycle1(w: GradedElement):
    return w, not dR(w)


def _cycle0(w: GradedElement, mf: MatrixFactorization):
    R = w.ring
    D = TwistedComplex(R, R.coerce(mf.potential) * R.gen("t"))
    return w, not D(w)
