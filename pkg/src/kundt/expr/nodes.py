"""Immutable expression trees.

Nodes are hashable and compare structurally.  Arithmetic operators on nodes
return *simplified* trees (see :mod:`kundt.expr.ratfunc`), so tensor code can
combine expressions with ``+``, ``*`` and ``/`` without growing raw trees.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt")


class Expr:
    __slots__ = ("_hash", "_rf", "_free", "_str", "_dcache")

    def _init_cache(self):
        self._hash = None
        self._rf = None
        self._free = None
        self._str = None
        self._dcache = None

    # structural identity -------------------------------------------------
    def _key(self):
        raise NotImplementedError

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self._key()))
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expr) or type(self) is not type(other):
            return NotImplemented if not isinstance(other, Expr) else False
        if hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    @property
    def free_symbols(self) -> frozenset:
        """Names of all coordinate and parameter symbols in the tree."""
        if self._free is None:
            out = frozenset()
            for c in self.children():
                out |= c.free_symbols
            self._free = out
        return self._free

    def children(self):
        return ()

    def __str__(self):
        if self._str is None:
            from .printer import to_str
            self._str = to_str(self)
        return self._str

    def __repr__(self):
        return f"Expr({str(self)!r})"

    # arithmetic (simplifying) -------------------------------------------
    def __add__(self, other):
        return _binary("add", self, other)

    def __radd__(self, other):
        return _binary("add", other, self)

    def __sub__(self, other):
        return _binary("sub", self, other)

    def __rsub__(self, other):
        return _binary("sub", other, self)

    def __mul__(self, other):
        return _binary("mul", self, other)

    def __rmul__(self, other):
        return _binary("mul", other, self)

    def __truediv__(self, other):
        return _binary("div", self, other)

    def __rtruediv__(self, other):
        return _binary("div", other, self)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        from .ratfunc import canon, to_tree
        return to_tree(canon(self).pow(n))

    def __neg__(self):
        from .ratfunc import canon, to_tree
        return to_tree(-canon(self))

    def __pos__(self):
        return self

    @property
    def is_const(self):
        return isinstance(self, Const)

    @property
    def is_zero_const(self):
        return isinstance(self, Const) and self.value == 0


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        self._init_cache()
        if isinstance(value, float):
            value = Fraction(value).limit_denominator(10**12)
        self.value = Fraction(value)

    def _key(self):
        return (self.value,)

    @property
    def free_symbols(self):
        return frozenset()


class Sym(Expr):
    """A chart coordinate."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self._init_cache()
        self.name = name

    def _key(self):
        return (self.name,)

    @property
    def free_symbols(self):
        return frozenset((self.name,))

    @property
    def sort_key(self):
        return (0, self.name)


class Param(Sym):
    """A named parameter: an opaque symbol that is never differentiated by."""

    __slots__ = ()

    @property
    def sort_key(self):
        return (1, self.name)


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        self._init_cache()
        self.terms = tuple(terms)

    def _key(self):
        return self.terms

    def children(self):
        return self.terms


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors):
        self._init_cache()
        self.factors = tuple(factors)

    def _key(self):
        return self.factors

    def children(self):
        return self.factors


class Div(Expr):
    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self._init_cache()
        self.num = num
        self.den = den

    def _key(self):
        return (self.num, self.den)

    def children(self):
        return (self.num, self.den)


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base, exp: int):
        self._init_cache()
        self.base = base
        self.exp = int(exp)

    def _key(self):
        return (self.base, self.exp)

    def children(self):
        return (self.base,)


class Func(Expr):
    __slots__ = ("fname", "arg", "_sk")

    def __init__(self, fname: str, arg):
        if fname not in FUNCTIONS:
            raise ValueError(f"unknown function {fname!r}")
        self._init_cache()
        self.fname = fname
        self.arg = arg
        self._sk = None

    def _key(self):
        return (self.fname, self.arg)

    def children(self):
        return (self.arg,)

    @property
    def sort_key(self):
        if self._sk is None:
            self._sk = (2, self.fname + "(" + str(self.arg) + ")")
        return self._sk


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Rational, float)):
        return Const(x)
    if isinstance(x, str):
        raise TypeError("strings must be parsed with a declared symbol table first")
    raise TypeError(f"cannot convert {type(x).__name__} to an expression")


def _binary(op, a, b):
    from .ratfunc import canon, to_tree
    ra, rb = canon(as_expr(a)), canon(as_expr(b))
    if op == "add":
        r = ra + rb
    elif op == "sub":
        r = ra - rb
    elif op == "mul":
        r = ra * rb
    else:
        r = ra / rb
    return to_tree(r)


ZERO = Const(0)
ONE = Const(1)
