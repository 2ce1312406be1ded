"""Recursive-descent parser for the expression grammar.

    expr   := term { ("+" | "-") term }
    term   := factor { "*" factor }
    factor := base [ "^" signed_int ] | "-" factor
    base   := rational | identifier | "(" expr ")"
    rational := int [ "/" int ]

Identifiers are letters followed by letters/digits; whitespace is
insignificant.  Parsing yields a canonical LaurentPoly directly, so
parse(format(p)) == p.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .expr import ExprError, LaurentPoly, VarContext


class ParseError(ExprError):
    """Syntax or name error, carrying the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_OPS = set("+-*^/()")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, value, position) triples; kind in {int, ident, op, end}."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha():
            j = i
            while j < n and text[j].isalnum():
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
        elif ch in _OPS:
            tokens.append(("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, context: VarContext,
                 aliases: Mapping[str, str] | None = None):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.context = context
        self.aliases = dict(aliases or {})

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, value, position = self.next()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}, found {value or 'end of input'!r}",
                             position)

    def parse(self) -> LaurentPoly:
        result = self.expr()
        kind, value, position = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", position)
        return result

    def expr(self) -> LaurentPoly:
        result = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.next()
                rhs = self.term()
                result = result + rhs if value == "+" else result - rhs
            else:
                return result

    def term(self) -> LaurentPoly:
        result = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.next()
                result = result * self.factor()
            else:
                return result

    def factor(self) -> LaurentPoly:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.next()
            return -self.factor()
        base = self.base()
        kind, value, position = self.peek()
        if kind == "op" and value == "^":
            self.next()
            return base ** self.signed_int()
        return base

    def signed_int(self) -> int:
        sign = 1
        kind, value, position = self.peek()
        if kind == "op" and value in "+-":
            self.next()
            sign = -1 if value == "-" else 1
            kind, value, position = self.peek()
        if kind != "int":
            raise ParseError("expected an integer exponent", position)
        self.next()
        return sign * int(value)

    def base(self) -> LaurentPoly:
        kind, value, position = self.next()
        if kind == "int":
            numerator = int(value)
            kind, nxt, _ = self.peek()
            if kind == "op" and nxt == "/":
                self.next()
                kind, denom, dpos = self.next()
                if kind != "int":
                    raise ParseError("expected an integer denominator", dpos)
                return self.context.scalar(Fraction(numerator, int(denom)))
            return self.context.scalar(numerator)
        if kind == "ident":
            name = self.aliases.get(value, value)
            if name not in self.context.names:
                raise ParseError(f"unknown identifier {value!r}", position)
            return self.context.var(name)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected {value or 'end of input'!r}", position)


def parse_expr(text: str, context: VarContext,
               aliases: Mapping[str, str] | None = None) -> LaurentPoly:
    """Parse ``text`` over ``context`` into a canonical LaurentPoly.

    ``aliases`` maps alternative spellings onto context names (the CLI uses
    this to accept X1..X6 for the quotient generators x1..x6).
    """
    return _Parser(text, context, aliases).parse()
