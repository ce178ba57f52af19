"""Render trees in the same grammar the parser accepts."""

from .nodes import Add, Const, Div, Func, Mul, Pow, Sym


def _const_str(v):
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _is_atomic(e):
    if isinstance(e, Const):
        return e.value >= 0 and e.value.denominator == 1
    return isinstance(e, (Sym, Func))


def _negated(m):
    """For ``Mul(-c, ...)`` return the factors of the negated product."""
    f0 = m.factors[0] if m.factors else None
    if isinstance(f0, Const) and f0.value < 0:
        rest = list(m.factors[1:])
        if f0.value != -1:
            rest.insert(0, Const(-f0.value))
        return rest
    return None


def _paren(e):
    return f"({to_str(e)})"


def to_str(e) -> str:
    if isinstance(e, Const):
        return _const_str(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Func):
        return f"{e.fname}({to_str(e.arg)})"
    if isinstance(e, Pow):
        base = to_str(e.base) if _is_atomic(e.base) else _paren(e.base)
        return f"{base}^{e.exp}"
    if isinstance(e, Add):
        parts = []
        for i, t in enumerate(e.terms):
            neg = _negative_form(t)
            if neg is None:
                s = _paren(t) if isinstance(t, Add) else to_str(t)
                parts.append(s if i == 0 else " + " + s)
            else:
                parts.append(("-" if i == 0 else " - ") + _product(neg))
        return "".join(parts)
    if isinstance(e, Mul):
        rest = _negated(e)
        if rest is not None:
            return "-" + _product(rest)
        return _product(e.factors)
    if isinstance(e, Div):
        num = _paren(e.num) if isinstance(e.num, (Add, Div)) else to_str(e.num)
        den = to_str(e.den) if (_is_atomic(e.den) or isinstance(e.den, Pow)) else _paren(e.den)
        return f"{num}/{den}"
    raise TypeError(type(e).__name__)


def _product(factors):
    if not factors:
        return "1"
    out = []
    for i, f in enumerate(factors):
        if isinstance(f, Const):
            plain = f.value >= 0 and (i == 0 or f.value.denominator == 1)
            out.append(to_str(f) if plain else _paren(f))
        elif isinstance(f, Add) or (isinstance(f, Mul) and _negated(f) is not None):
            out.append(_paren(f))
        else:
            out.append(to_str(f))
    return "*".join(out)


def _negative_form(t):
    if isinstance(t, Const) and t.value < 0:
        return [Const(-t.value)]
    if isinstance(t, Mul):
        return _negated(t)
    return None
