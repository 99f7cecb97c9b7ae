"""Recursive-descent parser for equations and characteristics.

Grammar (whitespace ignored):

    equation  :=  "u_t" "=" expr
    expr      :=  term (("+" | "-") term)*
    term      :=  factor ("*" factor)*
    factor    :=  ("+" | "-") factor | power
    power     :=  atom ("^" integer)?
    atom      :=  rational | coordinate | "exp" "(" expr ")" | "(" expr ")"
    coordinate:=  "u" | "u_1" ... "u_9" | "y" | "t"
    rational  :=  digits ("/" digits)?

The argument of ``exp`` must simplify to a rational multiple of a single
0-jet coordinate (t, y or u).  Equation right-hand sides additionally may
not contain y, t or exponentials; that restriction is reported as a scope
error, not a syntax error.
"""

from __future__ import annotations

from fractions import Fraction

from .engine import EvolutionEquation
from .errors import ParseError, ScopeError
from .expr import ExpPolyExpr, T, coord_by_name

_OPS = "+-*^()="


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        self._scan()

    def _scan(self):
        i, text = 0, self.text
        n = len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch in _OPS:
                self.tokens.append(("op", ch, i))
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                num = int(text[i:j])
                den = 1
                if j < n and text[j] == "/" and j + 1 < n and text[j + 1].isdigit():
                    k = j + 1
                    while k < n and text[k].isdigit():
                        k += 1
                    den = int(text[j + 1 : k])
                    if den == 0:
                        raise ParseError("zero denominator", position=j + 1)
                    j = k
                self.tokens.append(("num", Fraction(num, den), i))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("name", text[i:j], i))
                i = j
                continue
            raise ParseError(
                f"unexpected character {ch!r}", position=i, expected=("token",)
            )
        self.tokens.append(("end", "", n))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _Lexer(text).tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, value, at = self.peek()
        if kind == "op" and value == op:
            return self.advance()
        raise ParseError(
            f"expected {op!r}", position=at, expected=(op,)
        )

    def fail(self, message, expected=()):
        _, _, at = self.peek()
        raise ParseError(message, position=at, expected=expected)

    # expr := term (("+"|"-") term)*
    def expr(self) -> ExpPolyExpr:
        out = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                out = out + rhs if value == "+" else out - rhs
            else:
                return out

    # term := factor ("*" factor)*
    def term(self) -> ExpPolyExpr:
        out = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                out = out * self.factor()
            else:
                return out

    # factor := ("+"|"-") factor | power
    def factor(self) -> ExpPolyExpr:
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.advance()
            inner = self.factor()
            return inner if value == "+" else -inner
        return self.power()

    # power := atom ("^" integer)?
    def power(self) -> ExpPolyExpr:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            k2, v2, at2 = self.peek()
            if k2 != "num" or v2.denominator != 1 or v2 < 0:
                raise ParseError(
                    "exponent must be a non-negative integer",
                    position=at2,
                    expected=("integer",),
                )
            self.advance()
            out = ExpPolyExpr.one()
            for _ in range(int(v2)):
                out = out * base
            return out
        return base

    # atom := rational | coordinate | "exp" "(" expr ")" | "(" expr ")"
    def atom(self) -> ExpPolyExpr:
        kind, value, at = self.peek()
        if kind == "num":
            self.advance()
            return ExpPolyExpr.constant(value)
        if kind == "op" and value == "(":
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "name":
            if value == "exp":
                self.advance()
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return self._exp_factor(inner, at)
            coord = coord_by_name(value)
            if coord is not None:
                if coord.jet_order is not None and not (0 <= coord.jet_order <= 9):
                    raise ParseError(
                        f"jet order out of range in {value!r}",
                        position=at,
                        expected=("u_1 .. u_9",),
                    )
                self.advance()
                return ExpPolyExpr.coordinate(coord)
            raise ParseError(
                f"unknown name {value!r}",
                position=at,
                expected=("u", "u_1..u_9", "y", "t", "exp", "number"),
            )
        self.fail(
            "expected a number, coordinate, 'exp(', or '('",
            expected=("number", "coordinate", "exp(", "("),
        )

    def _exp_factor(self, inner: ExpPolyExpr, at: int) -> ExpPolyExpr:
        if len(inner.terms) == 1:
            m = inner.terms[0]
            if not m.expvec and len(m.powers) == 1 and m.powers[0][1] == 1:
                coord = m.powers[0][0]
                if coord.is_zero_jet:
                    return ExpPolyExpr.exponential(coord, m.coeff)
        raise ParseError(
            "exp argument must be a rational multiple of t, y or u",
            position=at,
            expected=("w*y",),
        )

    def finish(self):
        kind, value, at = self.peek()
        if kind != "end":
            raise ParseError(
                f"unexpected trailing input {value!r}", position=at, expected=("end",)
            )


def parse_expression(text: str) -> ExpPolyExpr:
    """Parse a general characteristic expression."""
    p = _Parser(text)
    out = p.expr()
    p.finish()
    return out


def parse_characteristic(text: str) -> ExpPolyExpr:
    """Parse a candidate characteristic (no t dependence allowed)."""
    e = parse_expression(text)
    if e.depends_on(T):
        raise ScopeError("characteristics may not depend on t")
    return e


def parse_equation(text: str) -> EvolutionEquation:
    """Parse ``u_t = <expr>`` and validate the evolution-equation scope."""
    p = _Parser(text)
    kind, value, at = p.peek()
    if kind != "name" or value != "u_t":
        raise ParseError("equation must start with 'u_t'", position=at, expected=("u_t",))
    p.advance()
    p.expect_op("=")
    rhs = p.expr()
    p.finish()
    if any(m.expvec for m in rhs.terms):
        raise ScopeError("exponential right-hand sides are not supported")
    return EvolutionEquation(rhs)
