"""Parser and evaluator for univariate analytic expressions.

Surfaces are specified by profile functions A(u), B(v), beta(v) written
as plain text, e.g. ``"k - cos(v)"`` or ``"a*u^2"``.  The grammar:

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' exponent)?
    atom   := number | ident | ident '(' expr ')' | '(' expr ')'

with standard precedence (^ binds tightest, then unary minus, then * /,
then + -) and left associativity.  ``exponent`` is a numeric literal,
optionally signed and optionally parenthesized, restricted to integer or
half-integer values so jet composition stays analytic.  Identifiers are
the variable (u or v), the function names sin, cos, sinh, cosh, exp, ln,
sqrt, or parameter names bound at evaluation time.  An expression may
reference at most one of u, v.

Evaluation is provided both over plain numbers and over jets; the two
agree at the jet's constant term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .jets import Jet2, JetError, jet_compose_univariate, jet_power

__all__ = [
    "ExprAst",
    "ParseError",
    "EvalError",
    "parse",
    "eval_number",
    "eval_jet",
    "to_string",
    "FUNCTIONS",
]

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp", "ln", "sqrt")

_NUMERIC_FUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "exp": np.exp,
    "ln": np.log,
    "sqrt": np.sqrt,
}


class ParseError(ValueError):
    """Syntax error; carries the offending position in ``position``."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvalError(ValueError):
    """Unbound parameter or a singular evaluation point."""


# -- AST nodes -----------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: float


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, Bin, Pow, Call]


@dataclass(frozen=True)
class ExprAst:
    """Parsed expression plus the coordinate variable it references."""

    root: Node
    variable: str | None  # 'u', 'v', or None for variable-free expressions
    parameters: frozenset[str]


# -- tokenizer -----------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num' | 'ident' | 'op'
    text: str
    pos: int
    value: float = 0.0


def _tokenize(text: str) -> list[_Token]:
    toks: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            try:
                val = float(text[i:j])
            except ValueError:
                raise ParseError(f"bad number {text[i:j]!r}", i) from None
            toks.append(_Token("num", text[i:j], i, val))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Token("ident", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^()":
            toks.append(_Token("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    return toks


# -- parser --------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def _peek(self) -> _Token | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def _next(self) -> _Token:
        tok = self._peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.pos += 1
        return tok

    def _accept_op(self, *ops: str) -> _Token | None:
        tok = self._peek()
        if tok is not None and tok.kind == "op" and tok.text in ops:
            self.pos += 1
            return tok
        return None

    def _expect_op(self, op: str) -> _Token:
        tok = self._accept_op(op)
        if tok is None:
            at = self._peek()
            pos = at.pos if at is not None else len(self.text)
            raise ParseError(f"expected {op!r}", pos)
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self._peek()
        if tok is not None:
            raise ParseError(f"trailing input {tok.text!r}", tok.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            tok = self._accept_op("+", "-")
            if tok is None:
                return node
            node = Bin(tok.text, node, self.term())

    def term(self) -> Node:
        node = self.factor()
        while True:
            tok = self._accept_op("*", "/")
            if tok is None:
                return node
            node = Bin(tok.text, node, self.factor())

    def factor(self) -> Node:
        if self._accept_op("-") is not None:
            return Neg(self.factor())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self._accept_op("^") is None:
            return base
        exponent = self._exponent()
        return Pow(base, exponent)

    def _exponent(self) -> float:
        paren = self._accept_op("(") is not None
        sign = -1.0 if self._accept_op("-") is not None else 1.0
        tok = self._next()
        if tok.kind != "num":
            raise ParseError("exponent must be a numeric literal", tok.pos)
        if paren:
            self._expect_op(")")
        value = sign * tok.value
        if (2.0 * value) != round(2.0 * value):
            raise ParseError("exponent must be an integer or half-integer", tok.pos)
        return value

    def atom(self) -> Node:
        tok = self._peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        if tok.kind == "num":
            self._next()
            return Num(tok.value)
        if tok.kind == "ident":
            self._next()
            if self._accept_op("(") is not None:
                if tok.text not in FUNCTIONS:
                    raise ParseError(f"unknown function {tok.text!r}", tok.pos)
                arg = self.expr()
                self._expect_op(")")
                return Call(tok.text, arg)
            return Var(tok.text)
        if self._accept_op("(") is not None:
            node = self.expr()
            self._expect_op(")")
            return node
        raise ParseError(f"unexpected token {tok.text!r}", tok.pos)


def _collect_names(node: Node, out: set[str]) -> None:
    if isinstance(node, Var):
        out.add(node.name)
    elif isinstance(node, Neg):
        _collect_names(node.arg, out)
    elif isinstance(node, Bin):
        _collect_names(node.left, out)
        _collect_names(node.right, out)
    elif isinstance(node, Pow):
        _collect_names(node.base, out)
    elif isinstance(node, Call):
        _collect_names(node.arg, out)


def parse(text: str) -> ExprAst:
    """Parse ``text`` into an :class:`ExprAst`."""
    root = _Parser(text).parse()
    names: set[str] = set()
    _collect_names(root, names)
    coords = names & {"u", "v"}
    if len(coords) > 1:
        raise ParseError("expression may reference only one of u, v", 0)
    variable = coords.pop() if coords else None
    return ExprAst(root, variable, frozenset(names - {"u", "v"}))


# -- evaluation -----------------------------------------------------------


def eval_number(ast: ExprAst, x: float, bindings: dict[str, float] | None = None) -> complex:
    """Evaluate at a plain number substituted for the variable."""
    bindings = bindings or {}

    def rec(node: Node) -> complex:
        if isinstance(node, Num):
            return node.value
        if isinstance(node, Var):
            if node.name == ast.variable:
                return x
            if node.name in bindings:
                return bindings[node.name]
            raise EvalError(f"unbound parameter {node.name!r}")
        if isinstance(node, Neg):
            return -rec(node.arg)
        if isinstance(node, Bin):
            a, b = rec(node.left), rec(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if b == 0:
                raise EvalError("division by zero")
            return a / b
        if isinstance(node, Pow):
            base = rec(node.base)
            p = node.exponent
            if p == round(p):
                if base == 0 and p < 0:
                    raise EvalError("zero raised to a negative power")
                return base ** int(p)
            if complex(base).real <= 0 and abs(complex(base).imag) < 1e-300:
                raise EvalError(f"fractional power of nonpositive value {base}")
            return complex(base) ** p
        if isinstance(node, Call):
            arg = complex(rec(node.arg))
            if node.func == "ln" and arg.real <= 0 and abs(arg.imag) < 1e-300:
                raise EvalError(f"ln of nonpositive value {arg}")
            if node.func == "sqrt" and arg.real < 0 and abs(arg.imag) < 1e-300:
                raise EvalError(f"sqrt of negative value {arg}")
            out = _NUMERIC_FUNCS[node.func](arg)
            return complex(out)
        raise TypeError(f"unknown node {node!r}")

    return rec(ast.root)


def eval_jet(ast: ExprAst, var_jet: Jet2, bindings: dict[str, float] | None = None) -> Jet2:
    """Evaluate to a jet; the variable is replaced by ``var_jet``."""
    bindings = bindings or {}
    base, order = var_jet.base, var_jet.order

    def rec(node: Node) -> Jet2:
        if isinstance(node, Num):
            return Jet2.constant(node.value, base, order)
        if isinstance(node, Var):
            if node.name == ast.variable:
                return var_jet
            if node.name in bindings:
                return Jet2.constant(bindings[node.name], base, order)
            raise EvalError(f"unbound parameter {node.name!r}")
        if isinstance(node, Neg):
            return -rec(node.arg)
        if isinstance(node, Bin):
            a, b = rec(node.left), rec(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            try:
                return a / b
            except JetError as err:
                raise EvalError(str(err)) from None
        if isinstance(node, Pow):
            try:
                return jet_power(rec(node.base), node.exponent)
            except JetError as err:
                raise EvalError(str(err)) from None
        if isinstance(node, Call):
            try:
                return jet_compose_univariate(node.func, rec(node.arg))
            except JetError as err:
                raise EvalError(str(err)) from None
        raise TypeError(f"unknown node {node!r}")

    return rec(ast.root)


# -- pretty printing -------------------------------------------------------


def to_string(ast: ExprAst) -> str:
    """Render back to parseable text (round-trips through :func:`parse`)."""

    def rec(node: Node) -> str:
        if isinstance(node, Num):
            return repr(node.value)
        if isinstance(node, Var):
            return node.name
        if isinstance(node, Neg):
            return f"-({rec(node.arg)})"
        if isinstance(node, Bin):
            return f"({rec(node.left)} {node.op} {rec(node.right)})"
        if isinstance(node, Pow):
            return f"({rec(node.base)})^({node.exponent!r})"
        if isinstance(node, Call):
            return f"{node.func}({rec(node.arg)})"
        raise TypeError(f"unknown node {node!r}")

    return rec(ast.root)
