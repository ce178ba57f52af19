"""Recursive-descent parser for the expression grammar.

::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' ['-'] integer)?
    base   := number | symbol | '(' expr ')' | func '(' expr ')'
    func   := 'exp' | 'log' | 'sin' | 'cos' | 'sqrt'
    number := integer ('/' integer)? | decimal

Whitespace is ignored.  Symbols must be declared up front as coordinates or
parameters; anything else is a syntax error at the symbol's position.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ExprSyntaxError
from .nodes import FUNCTIONS, Add, Const, Div, Func, Mul, Param, Pow, Sym

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))")


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.toks = []
        pos = 0
        n = len(text)
        while pos < n:
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if m is None:
                start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
                raise ExprSyntaxError(f"unexpected character {text[start]!r}", start, "a number, symbol, or operator")
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        if self.i < len(self.toks):
            return self.toks[self.i]
        return ("end", "", len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, value, what):
        kind, v, pos = self.peek()
        if v != value or kind != "op":
            raise ExprSyntaxError(f"unexpected {v!r}" if v else "unexpected end of input", pos, what)
        return self.take()


class Parser:
    def __init__(self, coords=(), params=()):
        self.coords = {c: Sym(c) for c in coords}
        self.params = {p: Param(p) for p in params}
        clash = set(self.coords) & set(self.params)
        if clash:
            raise ValueError(f"names declared both as coordinate and parameter: {sorted(clash)}")
        bad = (set(self.coords) | set(self.params)) & set(FUNCTIONS)
        if bad:
            raise ValueError(f"function names cannot be symbols: {sorted(bad)}")

    def parse(self, text: str):
        toks = _Tokens(text)
        if not toks.toks:
            raise ExprSyntaxError("empty expression", 0, "an expression")
        e = self._expr(toks)
        kind, v, pos = toks.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {v!r}", pos, "an operator or end of input")
        return e

    def _expr(self, t):
        terms = [self._term(t)]
        while True:
            kind, v, _ = t.peek()
            if kind == "op" and v in "+-":
                t.take()
                rhs = self._term(t)
                terms.append(rhs if v == "+" else _negate(rhs))
            else:
                break
        return terms[0] if len(terms) == 1 else Add(terms)

    def _term(self, t):
        node = self._factor(t)
        while True:
            kind, v, _ = t.peek()
            if kind == "op" and v in "*/":
                t.take()
                rhs = self._factor(t)
                if v == "*":
                    if isinstance(node, Mul):
                        node = Mul(node.factors + (rhs,))
                    else:
                        node = Mul((node, rhs))
                else:
                    node = Div(node, rhs)
            else:
                return node

    def _factor(self, t):
        kind, v, _ = t.peek()
        if kind == "op" and v == "-":
            t.take()
            return _negate(self._factor(t))
        if kind == "op" and v == "+":
            t.take()
            return self._factor(t)
        base = self._base(t)
        kind, v, _ = t.peek()
        if kind == "op" and v == "^":
            t.take()
            sign = 1
            kind, v, pos = t.peek()
            if kind == "op" and v in "+-":
                t.take()
                sign = -1 if v == "-" else 1
                kind, v, pos = t.peek()
            if kind == "op" and v == "(":
                # tolerate x^(-2) and x^(3)
                t.take()
                inner_sign = 1
                k2, v2, p2 = t.peek()
                if k2 == "op" and v2 in "+-":
                    t.take()
                    inner_sign = -1 if v2 == "-" else 1
                    k2, v2, p2 = t.peek()
                if k2 != "num" or not v2.isdigit():
                    raise ExprSyntaxError(f"unexpected {v2!r}", p2, "an integer exponent")
                t.take()
                t.expect(")", "')'")
                return Pow(base, sign * inner_sign * int(v2))
            if kind != "num" or not v.isdigit():
                raise ExprSyntaxError(f"unexpected {v!r}" if v else "unexpected end of input", pos, "an integer exponent")
            t.take()
            return Pow(base, sign * int(v))
        return base

    def _base(self, t):
        kind, v, pos = t.take()
        if kind == "num":
            return Const(Fraction(v))
        if kind == "name":
            if v in FUNCTIONS:
                t.expect("(", f"'(' after {v}")
                arg = self._expr(t)
                t.expect(")", "')'")
                return Func(v, arg)
            if v in self.coords:
                return self.coords[v]
            if v in self.params:
                return self.params[v]
            raise ExprSyntaxError(f"undeclared symbol {v!r}", pos, "a declared coordinate or parameter")
        if kind == "op" and v == "(":
            e = self._expr(t)
            t.expect(")", "')'")
            return e
        raise ExprSyntaxError(f"unexpected {v!r}" if v else "unexpected end of input", pos,
                              "a number, symbol, function, or '('")


def _negate(e):
    if isinstance(e, Const):
        return Const(-e.value)
    if isinstance(e, Mul):
        return Mul((Const(-1),) + e.factors)
    return Mul((Const(-1), e))


def parse(text: str, coords=(), params=()):
    """Parse ``text`` with the given declared coordinate and parameter names."""
    return Parser(coords, params).parse(text)
