"""Self-contained symbolic scalar expressions over chart coordinates."""

from .evaluate import Program, evaluate, evaluate_many
from .nodes import FUNCTIONS, ONE, ZERO, Add, Const, Div, Expr, Func, Mul, Param, Pow, Sym, as_expr
from .parser import Parser, parse
from .ratfunc import canon, simplify, to_tree
from .ratfunc import derivative as _rf_derivative
from .ratfunc import substitute_rf as _substitute_rf
from .zero import default_box, is_zero, is_zero_rf, schwartz_zippel_bound


def differentiate(e, c):
    """Partial derivative of ``e`` with respect to coordinate ``c`` (name or Sym)."""
    name = c.name if isinstance(c, Sym) else c
    e = as_expr(e)
    cache = e._dcache
    if cache is None:
        cache = e._dcache = {}
    hit = cache.get(name)
    if hit is None:
        if name not in e.free_symbols:
            hit = ZERO
        else:
            hit = to_tree(_rf_derivative(canon(e), name))
        cache[name] = hit
    return hit


def substitute(e, mapping):
    """Replace symbols by expressions; ``mapping`` is name -> expression or number."""
    rfs = {k: canon(as_expr(v)) for k, v in mapping.items()}
    return to_tree(_substitute_rf(canon(as_expr(e)), rfs))


def total(items):
    """Sum of expressions, accumulated in canonical form."""
    from .ratfunc import ZERO as RZ
    acc = RZ
    for t in items:
        acc = acc + canon(as_expr(t))
    return to_tree(acc)


__all__ = [
    "Add", "Const", "Div", "Expr", "FUNCTIONS", "Func", "Mul", "ONE", "Param", "Parser", "Pow",
    "Program", "Sym", "ZERO", "as_expr", "canon", "default_box", "differentiate", "evaluate",
    "evaluate_many", "is_zero", "is_zero_rf", "parse", "schwartz_zippel_bound", "simplify", "substitute",
    "to_tree", "total",
]
