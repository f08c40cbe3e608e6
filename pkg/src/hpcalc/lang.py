"""Command-file language: lexer, recursive-descent parser, AST and printer.

One statement per line, ``#`` starts a comment. Expressions use rationals
``a/b``, identifiers, ``+ - * ^ ( )``, ``d(expr)``, ``inv(expr)`` and ``u``;
``^`` binds tighter than unary minus, which binds tighter than ``*``.
Multiplication is always explicit.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

__all__ = [
    "ParseError",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Pow",
    "Call",
    "MatrixLit",
    "Statement",
    "Session",
    "parse",
    "parse_expr",
    "print_expr",
    "print_session",
    "COMMANDS",
]

COMMANDS = (
    "check-core",
    "check-keylemma",
    "boundary",
    "chern1",
    "chern0",
    "verify-square",
    "koszul-dualize",
    "koszul-homology",
)
FUNCTIONS = ("d", "inv")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message, self.line, self.col = message, line, col


# -- AST --------------------------------------------------------------------------------
# ``pos`` is (line, col); it is excluded from equality so reparsed text compares equal.


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Neg:
    arg: "Expr"
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: "Expr"
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class MatrixLit:
    rows: tuple
    pos: tuple = field(default=(0, 0), compare=False)


Expr = Union[Num, Var, Neg, BinOp, Pow, Call, MatrixLit]


@dataclass(frozen=True)
class Statement:
    """``kind`` is the leading keyword; ``name`` the bound name (if any).

    ``fields`` maps keyword arguments (``A``, ``B``, ``pot``, ``alpha``, ``s``, ``l``,
    ``vars``, ``deg``, ``value``) and ``args`` holds positional command arguments.
    """

    kind: str
    name: str | None = None
    fields: tuple = ()
    args: tuple = ()
    pos: tuple = field(default=(0, 0), compare=False)

    def get(self, key: str, default=None):
        for k, v in self.fields:
            if k == key:
                return v
        return default


@dataclass(frozen=True)
class Session:
    statements: tuple

    @property
    def commands(self) -> list[Statement]:
        return [s for s in self.statements if s.kind in COMMANDS]


# -- lexer ------------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^()\[\],=])
    """,
    re.VERBOSE,
)
_KEYWORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*")


@dataclass(frozen=True)
class Token:
    kind: str  # num | word | op | end
    text: str
    line: int
    col: int


def tokenize_line(text: str, line: int, keyword_first: bool = True) -> list[Token]:
    """Tokens of one line; only a line's first word may contain hyphens."""
    out: list[Token] = []
    i = 0
    while i < len(text):
        if text[i] == "#":
            break
        m = _KEYWORD.match(text, i) if keyword_first and not out else None
        kind = "word"
        if m is None:
            m = _TOKEN.match(text, i)
            if not m:
                raise ParseError(f"unexpected character {text[i]!r}", line, i + 1)
            kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), line, i + 1))
        i = m.end()
    out.append(Token("end", "", line, i + 1))
    return out


# -- parser -----------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def next(self) -> Token:
        t = self.tok
        if t.kind != "end":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "word") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of line'!r}")
        return self.next()

    def word(self, what: str = "name") -> Token:
        if self.tok.kind != "word" or "-" in self.tok.text:
            self.error(f"expected {what}, found {self.tok.text or 'end of line'!r}")
        return self.next()

    def integer(self) -> int:
        sign = 1
        if self.at("-"):
            self.next()
            sign = -1
        t = self.tok
        if t.kind != "num" or "/" in t.text:
            self.error(f"expected an integer, found {t.text or 'end of line'!r}")
        self.next()
        return sign * int(t.text)

    def end(self):
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")

    # expr := term (('+'|'-') term)*
    def expr(self) -> Expr:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.next()
            left = BinOp(op.text, left, self.term(), (op.line, op.col))
        return left

    # term := unary ('*' unary)*
    def term(self) -> Expr:
        left = self.unary()
        while self.at("*"):
            op = self.next()
            left = BinOp("*", left, self.unary(), (op.line, op.col))
        return left

    # unary := '-' unary | power
    def unary(self) -> Expr:
        if self.at("-"):
            op = self.next()
            return Neg(self.unary(), (op.line, op.col))
        return self.power()

    # power := atom ('^' exponent)?,  exponent := '-' exponent | power
    def power(self) -> Expr:
        base = self.atom()
        if self.at("^"):
            op = self.next()
            return Pow(base, self.exponent(), (op.line, op.col))
        return base

    def exponent(self) -> Expr:
        if self.at("-"):
            op = self.next()
            return Neg(self.exponent(), (op.line, op.col))
        return self.power()

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.next()
            return Num(Fraction(t.text), (t.line, t.col))
        if t.kind == "word" and "-" not in t.text:
            self.next()
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg, (t.line, t.col))
            return Var(t.text, (t.line, t.col))
        if self.at("("):
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if self.at("["):
            return self.matrix()
        self.error(f"expected an expression, found {t.text or 'end of line'!r}")

    def matrix(self) -> MatrixLit:
        start = self.expect("[")
        rows = []
        while True:
            self.expect("[")
            row = [self.expr()]
            while self.at(","):
                self.next()
                row.append(self.expr())
            self.expect("]")
            rows.append(tuple(row))
            if not self.at(","):
                break
            self.next()
        self.expect("]")
        if len({len(r) for r in rows}) != 1:
            self.error("matrix rows have different lengths", start)
        return MatrixLit(tuple(rows), (start.line, start.col))

    def assignment(self, key: str, value):
        self.expect(key)
        self.expect("=")
        return key, value()

    # statement := keyword ...
    def statement(self) -> Statement:
        t = self.tok
        pos = (t.line, t.col)
        if t.kind != "word":
            self.error("expected a statement keyword")
        kw = self.next().text
        if kw == "ring":
            name = self.word("ring name").text
            self.expect("vars")
            names = [self.word("variable").text]
            while self.tok.kind == "word":
                names.append(self.word("variable").text)
            st = Statement("ring", name, (("vars", tuple(names)),), (), pos)
        elif kw == "evenvar":
            name = self.word("variable").text
            self.expect("deg")
            st = Statement("evenvar", name, (("deg", self.integer()),), (), pos)
        elif kw in ("potential", "gpart", "elem"):
            name = self.word().text
            self.expect("=")
            st = Statement(kw, name, (("value", self.expr()),), (), pos)
        elif kw == "mf":
            name = self.word().text
            fields = (self.assignment("A", self.matrix), self.assignment("B", self.matrix), self.assignment("pot", self.expr))
            st = Statement("mf", name, fields, (), pos)
        elif kw == "class":
            name = self.word().text
            fields = (
                self.assignment("alpha", self.expr),
                self.assignment("s", self.integer),
                self.assignment("l", self.integer),
            )
            st = Statement("class", name, fields, (), pos)
        elif kw in ("check-core", "check-keylemma"):
            st = Statement(kw, None, (), (), pos)
        elif kw in ("boundary", "chern1", "chern0", "verify-square"):
            w = self.word()
            st = Statement(kw, None, (), (Var(w.text, (w.line, w.col)),), pos)
        elif kw in ("koszul-dualize", "koszul-homology"):
            args = [self.expr()]
            while self.at(","):
                self.next()
                args.append(self.expr())
            fields = (("N", self.integer()),) if kw == "koszul-homology" else ()
            st = Statement(kw, None, fields, tuple(args), pos)
        else:
            self.error(f"unknown statement {kw!r}", t)
        self.end()
        return st


def parse(text: str) -> Session:
    """Parse a command file into a :class:`Session` (raises :class:`ParseError`)."""
    statements = []
    for n, line in enumerate(text.splitlines(), 1):
        toks = tokenize_line(line, n)
        if toks[0].kind == "end":
            continue
        statements.append(_Parser(toks).statement())
    return Session(tuple(statements))


def parse_expr(text: str, line: int = 1) -> Expr:
    p = _Parser(tokenize_line(text, line, keyword_first=False))
    e = p.expr()
    p.end()
    return e


# -- printer ----------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    return 5


def _wrap(e: Expr, need: int) -> str:
    s = print_expr(e)
    return f"({s})" if _prec(e) < need else s


def print_expr(e: Expr) -> str:
    """Canonical text for ``e``; reparsing gives an equal AST."""
    if isinstance(e, Num):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({print_expr(e.arg)})"
    if isinstance(e, MatrixLit):
        return "[" + ", ".join("[" + ", ".join(print_expr(x) for x in r) + "]" for r in e.rows) + "]"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, 3)
    if isinstance(e, Pow):
        exp = e.exp
        if isinstance(exp, Neg):
            inner = exp
            while isinstance(inner, Neg):
                inner = inner.arg
            rhs = print_expr(exp) if _prec(inner) >= 4 else "-" * _neg_depth(exp) + f"({print_expr(inner)})"
        else:
            rhs = _wrap(exp, 4)
        return _wrap(e.base, 5) + "^" + rhs
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        # left-associative: the right operand needs parentheses at equal precedence
        return f"{_wrap(e.left, p)} {e.op} {_wrap(e.right, p + 1)}"
    raise TypeError(f"not an expression: {e!r}")


def _neg_depth(e: Expr) -> int:
    k = 0
    while isinstance(e, Neg):
        e, k = e.arg, k + 1
    return k


def _print_value(v) -> str:
    if isinstance(v, int):
        return str(v)
    return print_expr(v)


def print_statement(st: Statement) -> str:
    if st.kind == "ring":
        return f"ring {st.name} vars " + " ".join(st.get("vars"))
    if st.kind == "evenvar":
        return f"evenvar {st.name} deg {st.get('deg')}"
    if st.kind in ("potential", "gpart", "elem"):
        return f"{st.kind} {st.name} = {print_expr(st.get('value'))}"
    if st.kind in ("mf", "class"):
        return f"{st.kind} {st.name} " + " ".join(f"{k} = {_print_value(v)}" for k, v in st.fields)
    parts = [st.kind]
    if st.args:
        parts.append(", ".join(print_expr(a) for a in st.args))
    if st.get("N") is not None:
        parts.append(str(st.get("N")))
    return " ".join(parts)


def print_session(s: Session) -> str:
    return "".join(print_statement(st) + "\n" for st in s.statements)
