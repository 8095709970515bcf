"""Lexer, parser and printer for ``.tws`` scripts.

A script is one statement per line; ``#`` starts a comment::

    space n=2 a=[1,0] c2=normalized
    let s = e1 + w
    bundle V rank=2 c1=e1 c2=3*F
    bundle W = bundle(rank=2, c1=[1,0], c2=3)
    chi End(V)(-S)
    dim V
    assert 2*S + 2*Sbar == c1P
    print integrate(w^2*e1)
    verify canonical
    sweep n<=4 r<=3 k<=5 verify lemma2.5

Parsing only builds the tree; names are resolved by the interpreter.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union


class DslError(Exception):
    """Base for all script errors; ``code`` is stable and machine-readable."""

    code = "error"

    def __init__(self, message: str, line: int | None = None, col: int | None = None,
                 statement: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        self.statement = statement
        super().__init__(self.__str__())

    def __str__(self) -> str:
        where = ""
        if self.line is not None:
            where = f"line {self.line}, col {self.col}: "
        return f"{self.code} error: {where}{self.message}"

    def to_json(self) -> dict:
        return {"code": self.code, "message": self.message, "line": self.line,
                "col": self.col, "statement": self.statement}


class LexError(DslError):
    code = "lex"


class ParseError(DslError):
    code = "syntax"


# -- tokens -------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # INT, NAME, OP, NEWLINE, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_.]*)
  | (?P<op>==|<=|[-+*^()\[\],=;])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise LexError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "newline":
            tokens.append(Token("NEWLINE", "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind == "int":
            tokens.append(Token("INT", m.group(), line, col))
        elif kind == "name":
            tokens.append(Token("NAME", m.group(), line, col))
        elif kind == "op":
            # ';' separates statements like a newline
            tokens.append(Token("NEWLINE" if m.group() == ";" else "OP", m.group(), line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


# -- AST ----------------------------------------------------------------------
# Source positions are kept out of equality so reprinted scripts compare equal.

def _pos():
    return field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Name:
    name: str
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Call:
    """``integrate(x)`` takes a class; ``chi``, ``dim``, ``c1``..``c3`` take a bundle."""

    func: str
    arg: Union["Expr", "BundleExpr"]
    pos: tuple[int, int] = _pos()


Expr = Union[Num, Name, Neg, BinOp, Pow, Call]


@dataclass(frozen=True)
class BundleRef:
    name: str
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class LineBundle:
    c1: Expr
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class EndOf:
    bundle: "BundleExpr"
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class DualOf:
    bundle: "BundleExpr"
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Twist:
    bundle: "BundleExpr"
    by: Expr
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class PullbackLiteral:
    rank: int
    b: tuple[int, ...]
    k: int
    pos: tuple[int, int] = _pos()


BundleExpr = Union[BundleRef, LineBundle, EndOf, DualOf, Twist, PullbackLiteral]


@dataclass(frozen=True)
class SpaceDef:
    n: int
    a: tuple[int, ...] | None = None
    c2: str | None = None
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class LetDef:
    name: str
    expr: Expr
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class BundleDef:
    name: str
    rank: int
    c1: Expr
    c2: Expr
    c3: Expr | None = None
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class BundleAlias:
    name: str
    value: BundleExpr
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Query:
    """``chi``/``dim`` carry a bundle, ``print`` an expression, ``verify`` a
    target name and ``sweep`` its option list plus an optional target."""

    kind: str
    arg: object = None
    options: tuple[tuple[str, str, str], ...] = ()
    pos: tuple[int, int] = _pos()


@dataclass(frozen=True)
class Assertion:
    lhs: Expr
    rhs: Expr
    pos: tuple[int, int] = _pos()


Statement = Union[SpaceDef, LetDef, BundleDef, BundleAlias, Query, Assertion]


@dataclass(frozen=True)
class Script:
    statements: tuple[Statement, ...]


KEYWORDS = {"space", "let", "bundle", "chi", "dim", "verify", "sweep", "print", "assert"}
BUNDLE_FUNCS = {"chi", "dim", "c1", "c2", "c3"}
C2_CHOICES = ("paper", "normalized")


# -- parser -------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        found = "end of line" if tok.kind in ("NEWLINE", "EOF") else repr(tok.text)
        return ParseError(f"{msg}, found {found}", tok.line, tok.col)

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        if not self.at(kind, text):
            raise self.error(f"expected {what or text or kind}")
        return self.advance()

    def expect_int(self, signed: bool = False) -> int:
        sign = 1
        if signed and self.at("OP", "-"):
            self.advance()
            sign = -1
        return sign * int(self.expect("INT", what="integer").text)

    def keyword_arg(self, key: str) -> None:
        self.expect("NAME", key, f"'{key}='")
        self.expect("OP", "=", "'='")

    # script
    def script(self) -> Script:
        stmts = []
        while not self.at("EOF"):
            if self.at("NEWLINE"):
                self.advance()
                continue
            stmts.append(self.statement())
            if not (self.at("NEWLINE") or self.at("EOF")):
                raise self.error("expected end of statement")
        return Script(tuple(stmts))

    def statement(self) -> Statement:
        t = self.tok
        if t.kind != "NAME" or t.text not in KEYWORDS:
            raise self.error("expected a statement keyword (" + ", ".join(sorted(KEYWORDS)) + ")")
        return getattr(self, "st_" + t.text)()

    def st_space(self) -> SpaceDef:
        t = self.advance()
        self.keyword_arg("n")
        n = self.expect_int()
        a = c2 = None
        while self.at("NAME"):
            if self.tok.text == "a" and a is None:
                self.keyword_arg("a")
                a = self.int_list()
            elif self.tok.text == "c2" and c2 is None:
                self.keyword_arg("c2")
                c2tok = self.expect("NAME", what="'paper' or 'normalized'")
                if c2tok.text not in C2_CHOICES:
                    raise self.error("expected 'paper' or 'normalized'", c2tok)
                c2 = c2tok.text
            else:
                raise self.error("expected 'a=' or 'c2='")
        return SpaceDef(n, a, c2, (t.line, t.col))

    def int_list(self) -> tuple[int, ...]:
        self.expect("OP", "[", "'['")
        items = []
        if not self.at("OP", "]"):
            items.append(self.expect_int(signed=True))
            while self.at("OP", ","):
                self.advance()
                items.append(self.expect_int(signed=True))
        self.expect("OP", "]", "']'")
        return tuple(items)

    def ident(self) -> Token:
        tok = self.expect("NAME", what="identifier")
        if tok.text in KEYWORDS:
            raise self.error("keyword cannot be used as a name", tok)
        return tok

    def st_let(self) -> LetDef:
        t = self.advance()
        name = self.ident().text
        self.expect("OP", "=", "'='")
        return LetDef(name, self.expr(), (t.line, t.col))

    def st_bundle(self) -> BundleDef | BundleAlias:
        t = self.advance()
        name = self.ident().text
        if self.at("OP", "="):
            self.advance()
            return BundleAlias(name, self.bundle_expr(), (t.line, t.col))
        self.keyword_arg("rank")
        rank = self.expect_int()
        self.keyword_arg("c1")
        c1 = self.expr()
        self.keyword_arg("c2")
        c2 = self.expr()
        c3 = None
        if self.at("NAME", "c3"):
            self.keyword_arg("c3")
            c3 = self.expr()
        return BundleDef(name, rank, c1, c2, c3, (t.line, t.col))

    def st_chi(self) -> Query:
        t = self.advance()
        return Query("chi", self.bundle_expr(), pos=(t.line, t.col))

    def st_dim(self) -> Query:
        t = self.advance()
        return Query("dim", self.bundle_expr(), pos=(t.line, t.col))

    def st_print(self) -> Query:
        t = self.advance()
        return Query("print", self.expr(), pos=(t.line, t.col))

    def st_verify(self) -> Query:
        t = self.advance()
        return Query("verify", self.expect("NAME", what="verification target").text,
                     pos=(t.line, t.col))

    def st_sweep(self) -> Query:
        t = self.advance()
        options = []
        target = None
        while self.at("NAME"):
            if self.tok.text == "verify":
                self.advance()
                target = self.expect("NAME", what="verification target").text
                continue
            key = self.advance().text
            if not (self.at("OP", "<=") or self.at("OP", "=")):
                raise self.error(f"expected '<=' or '=' after {key!r}")
            op = self.advance().text
            if self.at("INT"):
                value = self.advance().text
            elif self.at("OP", "-") and self.peek().kind == "INT":
                self.advance()
                value = "-" + self.advance().text
            else:
                value = self.expect("NAME", what="value").text
            options.append((key, op, value))
        return Query("sweep", target, tuple(options), (t.line, t.col))

    def st_assert(self) -> Assertion:
        t = self.advance()
        lhs = self.expr()
        self.expect("OP", "==", "'=='")
        return Assertion(lhs, self.expr(), (t.line, t.col))

    # class expressions: sum := term (('+'|'-') term)* ; term := unary ('*' unary)* ;
    # unary := '-' unary | power ; power := atom ('^' INT)?
    def expr(self) -> Expr:
        left = self.term()
        while self.at("OP", "+") or self.at("OP", "-"):
            op = self.advance()
            left = BinOp(op.text, left, self.term(), (op.line, op.col))
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at("OP", "*"):
            op = self.advance()
            left = BinOp("*", left, self.unary(), (op.line, op.col))
        return left

    def unary(self) -> Expr:
        if self.at("OP", "-"):
            op = self.advance()
            return Neg(self.unary(), (op.line, op.col))
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at("OP", "^"):
            op = self.advance()
            return Pow(base, self.expect_int(), (op.line, op.col))
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return Num(int(t.text), (t.line, t.col))
        if t.kind == "OP" and t.text == "(":
            self.advance()
            e = self.expr()
            self.expect("OP", ")", "')'")
            return e
        if t.kind == "NAME":
            if self.peek().kind == "OP" and self.peek().text == "(" and (
                    t.text in BUNDLE_FUNCS or t.text == "integrate"):
                self.advance()
                self.advance()
                arg = self.bundle_expr() if t.text in BUNDLE_FUNCS else self.expr()
                self.expect("OP", ")", "')'")
                return Call(t.text, arg, (t.line, t.col))
            if t.text in KEYWORDS:
                raise self.error("expected a class expression")
            self.advance()
            return Name(t.text, (t.line, t.col))
        raise self.error("expected a class expression")

    # bundle expressions: primary ('(' expr ')')*
    def bundle_expr(self) -> BundleExpr:
        t = self.tok
        if t.kind != "NAME":
            raise self.error("expected a bundle")
        nxt = self.peek()
        is_call = nxt.kind == "OP" and nxt.text == "("
        if t.text in ("End", "dual") and is_call:
            self.advance()
            self.advance()
            inner = self.bundle_expr()
            self.expect("OP", ")", "')'")
            b = EndOf(inner, (t.line, t.col)) if t.text == "End" else DualOf(inner, (t.line, t.col))
        elif t.text == "O" and is_call:
            self.advance()
            self.advance()
            b = LineBundle(self.expr(), (t.line, t.col))
            self.expect("OP", ")", "')'")
        elif t.text == "bundle" and is_call:
            b = self.pullback_literal()
        else:
            b = BundleRef(self.ident().text, (t.line, t.col))
        while self.at("OP", "("):
            op = self.advance()
            b = Twist(b, self.expr(), (op.line, op.col))
            self.expect("OP", ")", "')'")
        return b

    def pullback_literal(self) -> PullbackLiteral:
        t = self.advance()
        self.expect("OP", "(", "'('")
        self.keyword_arg("rank")
        rank = self.expect_int()
        self.expect("OP", ",", "','")
        self.keyword_arg("c1")
        b = self.int_list()
        self.expect("OP", ",", "','")
        self.keyword_arg("c2")
        k = self.expect_int(signed=True)
        self.expect("OP", ")", "')'")
        return PullbackLiteral(rank, b, k, (t.line, t.col))


def parse(text: str) -> Script:
    return _Parser(tokenize(text)).script()


# -- printer ------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    return 5


def print_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Call):
        inner = print_bundle(e.arg) if e.func in BUNDLE_FUNCS else print_expr(e.arg)
        return f"{e.func}({inner})"
    if isinstance(e, Neg):
        inner = print_expr(e.operand)
        return "-" + (inner if _prec(e.operand) >= 3 else f"({inner})")
    if isinstance(e, Pow):
        base = print_expr(e.base)
        return (base if _prec(e.base) >= 5 else f"({base})") + f"^{e.exponent}"
    p = _PREC[e.op]
    left = print_expr(e.left)
    right = print_expr(e.right)
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    sep = "*" if e.op == "*" else f" {e.op} "
    return left + sep + right


def print_bundle(b: BundleExpr) -> str:
    if isinstance(b, BundleRef):
        return b.name
    if isinstance(b, LineBundle):
        return f"O({print_expr(b.c1)})"
    if isinstance(b, EndOf):
        return f"End({print_bundle(b.bundle)})"
    if isinstance(b, DualOf):
        return f"dual({print_bundle(b.bundle)})"
    if isinstance(b, Twist):
        return f"{print_bundle(b.bundle)}({print_expr(b.by)})"
    return f"bundle(rank={b.rank}, c1=[{','.join(map(str, b.b))}], c2={b.k})"


def print_statement(s: Statement) -> str:
    if isinstance(s, SpaceDef):
        out = f"space n={s.n}"
        if s.a is not None:
            out += f" a=[{','.join(map(str, s.a))}]"
        if s.c2 is not None:
            out += f" c2={s.c2}"
        return out
    if isinstance(s, LetDef):
        return f"let {s.name} = {print_expr(s.expr)}"
    if isinstance(s, BundleDef):
        out = f"bundle {s.name} rank={s.rank} c1={print_expr(s.c1)} c2={print_expr(s.c2)}"
        if s.c3 is not None:
            out += f" c3={print_expr(s.c3)}"
        return out
    if isinstance(s, BundleAlias):
        return f"bundle {s.name} = {print_bundle(s.value)}"
    if isinstance(s, Assertion):
        return f"assert {print_expr(s.lhs)} == {print_expr(s.rhs)}"
    if s.kind in ("chi", "dim"):
        return f"{s.kind} {print_bundle(s.arg)}"
    if s.kind == "print":
        return f"print {print_expr(s.arg)}"
    if s.kind == "verify":
        return f"verify {s.arg}"
    parts = ["sweep"] + [f"{k}{op}{v}" for k, op, v in s.options]
    if s.arg is not None:
        parts += ["verify", s.arg]
    return " ".join(parts)


def print_script(script: Script) -> str:
    return "".join(print_statement(s) + "\n" for s in script.statements)
