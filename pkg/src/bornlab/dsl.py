"""Expression language for candidate distributions.

Candidates are real-valued functions of a complex overlap z, written in
terms of r = |z|, phi = arg(z), re = Re(z), im = Im(z).  Grammar (LL(1),
also published in docs/grammar.ebnf):

    expr    = term { ("+" | "-") term } ;
    term    = factor { ("*" | "/") factor } ;
    factor  = "-" factor | power ;
    power   = atom [ "^" factor ] ;
    atom    = NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")" ;

"^" is right-associative and binds tighter than unary minus, which binds
tighter than "*" and "/".  Known identifiers: variables r, phi, re, im;
constants pi, e; unary functions abs, sqrt, sin, cos, exp, ln.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import EvalError, ParseError, UnknownNameError

VARIABLES = ("r", "phi", "re", "im")
CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTIONS = ("abs", "sqrt", "sin", "cos", "exp", "ln")


@dataclass(frozen=True)
class Lit:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Lit, Var, Const, Neg, Bin, Call]


# --- lexer -----------------------------------------------------------------

_OPS = set("+-*/^()")


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, position) triples; kinds: num, ident, op, end."""
    tokens = []
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            tokens.append(("op", c, i))
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            start = i
            while i < n and source[i].isdigit():
                i += 1
            if i < n and source[i] == ".":
                i += 1
                while i < n and source[i].isdigit():
                    i += 1
            if i < n and source[i] in "eE":
                j = i + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    i = j
                    while i < n and source[i].isdigit():
                        i += 1
            text = source[start:i]
            try:
                float(text)
            except ValueError:
                raise ParseError(start, "a number", text)
            tokens.append(("num", text, start))
            continue
        if c.isalpha() or c == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            tokens.append(("ident", source[start:i], start))
            continue
        raise ParseError(i, "a token", c)
    tokens.append(("end", "", n))
    return tokens


# --- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, at = self.peek()
        if kind != "op" or text != op:
            raise ParseError(at, repr(op), text)
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        kind, text, at = self.peek()
        if kind != "end":
            raise ParseError(at, "end of input", text)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                left = Bin(text, left, self.term())
            else:
                return left

    def term(self) -> Expr:
        left = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                left = Bin(text, left, self.factor())
            else:
                return left

    def factor(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return Bin("^", base, self.factor())
        return base

    def atom(self) -> Expr:
        kind, text, at = self.advance()
        if kind == "num":
            return Lit(float(text))
        if kind == "ident":
            nkind, ntext, _ = self.peek()
            if nkind == "op" and ntext == "(":
                if text not in FUNCTIONS:
                    raise UnknownNameError(at, text)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            if text in VARIABLES:
                return Var(text)
            if text in CONSTANTS:
                return Const(text)
            raise UnknownNameError(at, text)
        if kind == "op" and text == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ParseError(at, "a number, identifier, or '('", text)


def parse_candidate(source: str) -> Expr:
    """Parse a candidate expression into its syntax tree."""
    if not source or not source.strip():
        raise ParseError(0, "a nonempty expression")
    return _Parser(source).parse()


# --- evaluation ------------------------------------------------------------


def _apply_func(name: str, x: float) -> float:
    if name == "abs":
        return abs(x)
    if name == "sqrt":
        if x < 0.0:
            raise EvalError(f"sqrt of negative value {x!r}")
        return math.sqrt(x)
    if name == "sin":
        return math.sin(x)
    if name == "cos":
        return math.cos(x)
    if name == "exp":
        try:
            return math.exp(x)
        except OverflowError:
            raise EvalError(f"exp overflow at {x!r}")
    if name == "ln":
        if x <= 0.0:
            raise EvalError(f"ln of non-positive value {x!r}")
        return math.log(x)
    raise EvalError(f"unknown function {name!r}")


def _pow(a: float, b: float) -> float:
    if a == 0.0 and b < 0.0:
        raise EvalError("zero raised to a negative power")
    if a < 0.0 and b != int(b):
        # real-valued candidates only: no complex excursions
        raise EvalError(f"negative base {a!r} with non-integer exponent {b!r}")
    try:
        return math.pow(a, b)
    except (ValueError, OverflowError) as exc:
        raise EvalError(str(exc))


def eval_expr(e: Expr, z: complex) -> float:
    """Evaluate an expression at overlap z.

    Environment: r = |z|, phi = arg(z) with arg(0) defined as 0,
    re = Re(z), im = Im(z).  Undefined operations raise EvalError.
    """
    z = complex(z)
    env = {
        "r": abs(z),
        "phi": 0.0 if z == 0 else math.atan2(z.imag, z.real),
        "re": z.real,
        "im": z.imag,
    }
    return _eval(e, env)


def _eval(e: Expr, env: dict) -> float:
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Neg):
        return -_eval(e.arg, env)
    if isinstance(e, Call):
        return _apply_func(e.func, _eval(e.arg, env))
    if isinstance(e, Bin):
        a = _eval(e.left, env)
        b = _eval(e.right, env)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            if b == 0.0:
                raise EvalError("division by zero")
            return a / b
        if e.op == "^":
            return _pow(a, b)
    raise EvalError(f"malformed expression node {e!r}")


# --- pretty printing -------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def pretty(e: Expr) -> str:
    """Render an expression; parse(pretty(parse(s))) == parse(s)."""
    return _pretty(e, 0)


def _pretty(e: Expr, parent_prec: int) -> str:
    if isinstance(e, Lit):
        v = e.value
        return repr(int(v)) if v == int(v) and abs(v) < 1e16 else repr(v)
    if isinstance(e, (Var, Const)):
        return e.name
    if isinstance(e, Neg):
        s = "-" + _pretty(e.arg, _PREC["neg"])
        return f"({s})" if parent_prec > _PREC["neg"] else s
    if isinstance(e, Call):
        return f"{e.func}({_pretty(e.arg, 0)})"
    if isinstance(e, Bin):
        prec = _PREC[e.op]
        if e.op == "^":
            # right-associative; the right side re-enters at unary level
            s = _pretty(e.left, prec + 1) + e.op + _pretty(e.right, _PREC["neg"])
        else:
            s = f"{_pretty(e.left, prec)} {e.op} {_pretty(e.right, prec + 1)}"
        return f"({s})" if parent_prec > prec else s
    raise ValueError(f"unknown node {e!r}")
