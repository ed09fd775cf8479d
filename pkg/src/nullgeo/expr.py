"""Parsing and evaluation of the immersion expression language.

Grammar, lowest to highest precedence:

    additive       :=  multiplicative (('+'|'-') multiplicative)*
    multiplicative :=  unary (('*'|'/') unary)*
    unary          :=  '-' unary | power
    power          :=  atom ('^' power)?          (right associative)
    atom           :=  NUMBER | 'x' | 'y' | 'pi' | NAME '(' additive ')'
                     | '(' additive ')'

Whitespace is insignificant.  There is no implicit multiplication, and
the right-hand side of '^' must be an atom or power ("2^-x" is a syntax
error; write "2^(-x)").
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .errors import ExprSyntaxError, UnknownIdentifierError
from .jets import ELEMENTARY, Jet2, jet_combine, jet_const

FUNCTIONS = tuple(name for name in ELEMENTARY if name != "neg")


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str  # "x" or "y"


@dataclass(frozen=True)
class Unary:
    fn: str  # elementary function name, or "neg"
    arg: "ExprAst"


@dataclass(frozen=True)
class Binary:
    op: str  # add / sub / mul / div / pow
    left: "ExprAst"
    right: "ExprAst"


ExprAst = Union[Const, Var, Unary, Binary]

_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
)
_WS_RE = re.compile(r"\s*")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "ident", one of "+-*/^()", or "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        pos = _WS_RE.match(text, pos).end()
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos,
                                  ("number", "identifier", "operator"))
        if m.lastgroup == "num":
            tokens.append(_Token("num", m.group(), pos))
        elif m.lastgroup == "ident":
            tokens.append(_Token("ident", m.group(), pos))
        else:
            tokens.append(_Token(m.group(), m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", n))
    return tokens


_ATOM_EXPECTED = ("number", "x", "y", "pi", "function(", "(")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExprSyntaxError(f"unexpected token {tok.text or 'end of input'!r}",
                                  tok.pos, (kind,))
        return self.advance()

    def parse(self) -> ExprAst:
        ast = self.additive()
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {tok.text!r}", tok.pos,
                                  ("+", "-", "*", "/", "^", "end of input"))
        return ast

    def additive(self) -> ExprAst:
        node = self.multiplicative()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.multiplicative()
            node = Binary("add" if op == "+" else "sub", node, rhs)
        return node

    def multiplicative(self) -> ExprAst:
        node = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            rhs = self.unary()
            node = Binary("mul" if op == "*" else "div", node, rhs)
        return node

    def unary(self) -> ExprAst:
        if self.peek().kind == "-":
            self.advance()
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> ExprAst:
        base = self.atom()
        if self.peek().kind == "^":
            self.advance()
            return Binary("pow", base, self.power())
        return base

    def atom(self) -> ExprAst:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Const(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if name in ("x", "y"):
                return Var(name)
            if name == "pi":
                return Const(math.pi)
            if name in FUNCTIONS:
                self.expect("(")
                arg = self.additive()
                self.expect(")")
                return Unary(name, arg)
            raise UnknownIdentifierError(name, tok.pos)
        if tok.kind == "(":
            self.advance()
            node = self.additive()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected token {tok.text or 'end of input'!r}",
                              tok.pos, _ATOM_EXPECTED)


def parse_expr(text: str) -> ExprAst:
    """Parse expression text into an AST."""
    return _Parser(text).parse()


def to_text(ast: ExprAst) -> str:
    """Render an AST as parseable text (fully parenthesized)."""
    if isinstance(ast, Const):
        return repr(ast.value)
    if isinstance(ast, Var):
        return ast.name
    if isinstance(ast, Unary):
        if ast.fn == "neg":
            return f"(-{to_text(ast.arg)})"
        return f"{ast.fn}({to_text(ast.arg)})"
    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}[ast.op]
    return f"({to_text(ast.left)}{sym}{to_text(ast.right)})"


def vars_used(ast: ExprAst) -> set[str]:
    if isinstance(ast, Var):
        return {ast.name}
    if isinstance(ast, Unary):
        return vars_used(ast.arg)
    if isinstance(ast, Binary):
        return vars_used(ast.left) | vars_used(ast.right)
    return set()


def eval_jet(ast: ExprAst, xj: Jet2, yj: Jet2) -> Jet2:
    """Evaluate an AST over jets seeded at a chart point."""
    if isinstance(ast, Const):
        return jet_const(ast.value)
    if isinstance(ast, Var):
        return xj if ast.name == "x" else yj
    if isinstance(ast, Unary):
        arg = eval_jet(ast.arg, xj, yj)
        return -arg if ast.fn == "neg" else ELEMENTARY[ast.fn](arg)
    return jet_combine(ast.op, eval_jet(ast.left, xj, yj), eval_jet(ast.right, xj, yj))
