"""Rational-function expressions in z: parsing and canonical printing."""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|(z)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}" + (f": {text!r}" if text else ""))
        self.position = position


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    out: list[tuple[str, object, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", int(m.group(1)), start))
        elif m.group(2):
            out.append(("z", None, start))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def is_op(self, *ops) -> bool:
        kind, val, _ = self.peek()
        return kind == "op" and val in ops

    def fail(self, msg: str):
        raise ParseError(msg, self.peek()[2], self.text)

    def parse(self) -> RatFunc:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        f = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected token")
        return f

    def expr(self) -> RatFunc:
        f = self.term()
        while self.is_op("+", "-"):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self) -> RatFunc:
        f = self.unary()
        while self.is_op("*", "/"):
            _, op, pos = self.take()
            g = self.unary()
            if op == "*":
                f = f * g
            elif g.is_zero():
                raise ParseError("division by zero", pos, self.text)
            else:
                f = f / g
        return f

    def unary(self) -> RatFunc:
        if self.is_op("-"):
            self.take()
            return -self.unary()
        if self.is_op("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if not self.is_op("^"):
            return base
        pos = self.take()[2]
        e = self.unary()  # right-associative, allows a leading minus
        if e.denom.degree != 0 or e.numer.degree > 0:
            raise ParseError("exponent must be a constant", pos, self.text)
        v = e.numer.coeffs[0] if e.numer.coeffs else Fraction(0)
        if Fraction(v).denominator != 1:
            raise ParseError(f"non-integer exponent {v}", pos, self.text)
        n = int(v)
        if n < 0 and base.is_zero():
            raise ParseError("division by zero", pos, self.text)
        return base**n

    def atom(self) -> RatFunc:
        kind, val, pos = self.take()
        if kind == "num":
            return RatFunc.const(val)
        if kind == "z":
            return RatFunc.z()
        if kind == "op" and val == "(":
            f = self.expr()
            if not self.is_op(")"):
                self.fail("expected ')'")
            self.take()
            return f
        raise ParseError("expected a number, z or '('", pos, self.text)


def parse_ratfunc(text: str) -> RatFunc:
    """Parse an expression in z with integer literals, + - * / ^ and parentheses."""
    return _Parser(text).parse()


def format_ratfunc(f: RatFunc) -> str:
    """Canonical text: expanded numerator over monic denominator."""
    return str(f)
