"""Canonical form: a quotient of polynomials with exact rational coefficients.

Generators of the polynomial ring are coordinate symbols, parameters, and
*atoms* -- applications of ``exp``/``log``/``sin``/``cos``/``sqrt`` to an
already canonical argument.  An expression free of atoms is a rational
function of its symbols, and in that case a zero numerator is an exact
certificate of identical vanishing.

A polynomial is a ``dict`` mapping a monomial to a nonzero ``Fraction``.  A
monomial is a tuple of ``(generator, exponent)`` pairs sorted by the
generator's ``sort_key``.

Normalisation of a quotient ``N/D`` (applied after every operation):

* constant denominators are folded into the numerator;
* the largest monomial dividing every term of ``N`` and ``D`` is cancelled;
* ``D`` is scaled to have leading coefficient 1 (graded lex order);
* if ``D`` divides ``N`` exactly the quotient replaces the fraction.

This is not a full multivariate gcd, so two equal functions may have
different canonical forms, but ``N == 0`` iff the rational function is zero.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .nodes import ONE as ONE_NODE
from .nodes import ZERO as ZERO_NODE
from .nodes import Add, Const, Div, Expr, Func, Mul, Param, Pow, Sym

_ONE_MONO = ()
_HIGH = (9, "")


def _gk(item):
    return item[0].sort_key


# --- monomials ------------------------------------------------------------

def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for g, e in b:
        d[g] = d.get(g, 0) + e
    return tuple(sorted(d.items(), key=_gk))


def mono_pow(a, n):
    return tuple((g, e * n) for g, e in a)


def mono_div(a, b):
    """``a / b`` if ``b`` divides ``a``, else ``None``."""
    if not b:
        return a
    d = dict(a)
    for g, e in b:
        r = d.get(g, 0) - e
        if r < 0:
            return None
        if r:
            d[g] = r
        else:
            del d[g]
    return tuple(sorted(d.items(), key=_gk))


@lru_cache(maxsize=1 << 16)
def mono_key(m):
    """Sort key: smaller key means *larger* monomial in graded lex order."""
    deg = sum(e for _, e in m)
    return (-deg, tuple((g.sort_key, -e) for g, e in m) + ((_HIGH, 0),))


def mono_degree(m):
    return sum(e for _, e in m)


# --- polynomials ------------------------------------------------------------

def p_const(c):
    c = Fraction(c)
    return {_ONE_MONO: c} if c else {}


def p_add(a, b):
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for m, c in b.items():
        v = out.get(m)
        if v is None:
            out[m] = c
        else:
            v = v + c
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def p_scale(a, c):
    if not c:
        return {}
    if c == 1:
        return a
    return {m: v * c for m, v in a.items()}


def p_neg(a):
    return {m: -v for m, v in a.items()}


def p_sub(a, b):
    return p_add(a, p_neg(b))


def p_mul(a, b):
    if not a or not b:
        return {}
    if len(a) == 1 and _ONE_MONO in a:
        return p_scale(b, a[_ONE_MONO])
    if len(b) == 1 and _ONE_MONO in b:
        return p_scale(a, b[_ONE_MONO])
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = mono_mul(m1, m2)
            v = out.get(m)
            if v is None:
                out[m] = c1 * c2
            else:
                v = v + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
    return out


def p_pow(a, n):
    if n == 0:
        return p_const(1)
    if len(a) == 1:
        (m, c), = a.items()
        return {mono_pow(m, n): c ** n}
    result = p_const(1)
    base = a
    while n:
        if n & 1:
            result = p_mul(result, base)
        n >>= 1
        if n:
            base = p_mul(base, base)
    return result


def p_is_const(a):
    return not a or (len(a) == 1 and _ONE_MONO in a)


def p_const_value(a):
    return a.get(_ONE_MONO, Fraction(0)) if p_is_const(a) else None


def p_lead(a):
    return min(a, key=mono_key)


def p_sorted(a):
    return sorted(a.items(), key=lambda t: mono_key(t[0]))


def p_mono_content(a):
    """Largest monomial dividing every term of ``a``."""
    it = iter(a)
    first = next(it)
    common = dict(first)
    for m in it:
        if not common:
            break
        md = dict(m)
        for g in list(common):
            e = md.get(g, 0)
            if e < common[g]:
                if e:
                    common[g] = e
                else:
                    del common[g]
    return tuple(sorted(common.items(), key=_gk))


def p_divexact(a, b):
    """Exact quotient ``a / b`` or ``None`` when ``b`` does not divide ``a``."""
    if not b:
        raise ZeroDivisionError
    if not a:
        return {}
    lb = p_lead(b)
    cb = b[lb]
    rest_b = {m: c for m, c in b.items() if m != lb}
    q = {}
    r = dict(a)
    guard = 0
    limit = 4 * (len(a) + 1) * (len(b) + 1) + 64
    while r:
        guard += 1
        if guard > limit:
            return None
        lr = p_lead(r)
        qm = mono_div(lr, lb)
        if qm is None:
            return None
        qc = r[lr] / cb
        q[qm] = q.get(qm, 0) + qc
        del r[lr]
        for m, c in rest_b.items():
            mm = mono_mul(m, qm)
            v = r.get(mm, 0) - c * qc
            if v:
                r[mm] = v
            else:
                r.pop(mm, None)
    return {m: c for m, c in q.items() if c}


def p_generators(a):
    gens = set()
    for m in a:
        for g, _ in m:
            gens.add(g)
    return gens


def p_degree(a):
    return max((mono_degree(m) for m in a), default=0)


# --- rational functions -----------------------------------------------------

class RatFunc:
    """Canonical quotient ``num / den``.  Treat instances as immutable."""

    __slots__ = ("num", "den", "_atoms")

    def __init__(self, num, den):
        self.num = num
        self.den = den
        self._atoms = None

    # construction ------------------------------------------------------
    @staticmethod
    def const(c):
        return RatFunc(p_const(c), p_const(1))

    @staticmethod
    def gen(g):
        return RatFunc({((g, 1),): Fraction(1)}, p_const(1))

    # predicates --------------------------------------------------------
    @property
    def is_zero(self):
        return not self.num

    @property
    def is_polynomial(self):
        return p_is_const(self.den)

    @property
    def const_value(self):
        if self.is_polynomial:
            v = p_const_value(self.num)
            if v is not None:
                return v
        return None

    @property
    def has_atoms(self):
        if self._atoms is None:
            self._atoms = any(isinstance(g, Func)
                              for g in p_generators(self.num) | p_generators(self.den))
        return self._atoms

    def __eq__(self, other):
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(frozenset(self.num.items())) ^ hash(frozenset(self.den.items()))

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = _coerce(other)
        if not self.num:
            return other
        if not other.num:
            return self
        da, db = self.den, other.den
        if da == db:
            return make(p_add(self.num, other.num), da)
        if p_is_const(da) and p_is_const(db):
            return make(p_add(p_scale(self.num, 1 / da[_ONE_MONO]),
                              p_scale(other.num, 1 / db[_ONE_MONO])), p_const(1))
        if len(db) >= len(da):
            q = p_divexact(db, da)
            if q is not None:
                return make(p_add(p_mul(self.num, q), other.num), db)
        else:
            q = p_divexact(da, db)
            if q is not None:
                return make(p_add(self.num, p_mul(other.num, q)), da)
        num = p_add(p_mul(self.num, db), p_mul(other.num, da))
        return make(num, p_mul(da, db))

    def __neg__(self):
        return RatFunc(p_neg(self.num), self.den)

    def __sub__(self, other):
        if not isinstance(other, RatFunc):
            other = _coerce(other)
        return self + (-other)

    def __radd__(self, other):
        return _coerce(other) + self

    def __rsub__(self, other):
        return _coerce(other) - self

    def __rmul__(self, other):
        return _coerce(other) * self

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            other = _coerce(other)
        if not self.num or not other.num:
            return ZERO
        if self.den == other.den and p_is_const(self.den):
            return make(p_mul(self.num, other.num), self.den)
        # cross-cancel before multiplying to keep sizes down
        n1, d2 = _cancel_pair(self.num, other.den)
        n2, d1 = _cancel_pair(other.num, self.den)
        return make(p_mul(n1, n2), p_mul(d1, d2))

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            other = _coerce(other)
        if not other.num:
            raise ZeroDivisionError("division by an identically zero expression")
        return self * RatFunc(other.den, other.num)._flip_normal()

    def _flip_normal(self):
        return make(self.num, self.den)

    def pow(self, n):
        if n == 0:
            return ONE
        if n < 0:
            if not self.num:
                raise ZeroDivisionError("negative power of zero")
            return make(p_pow(self.den, -n), p_pow(self.num, -n))
        return make(p_pow(self.num, n), p_pow(self.den, n))


def _coerce(x):
    # numbers and expression trees mix freely with canonical forms
    if isinstance(x, (int, Fraction)):
        return RatFunc.const(Fraction(x))
    if isinstance(x, Expr):
        return canon(x)
    raise TypeError(f"cannot combine a rational function with {type(x).__name__}")


def _cancel_pair(n, d):
    if p_is_const(d) or p_is_const(n):
        return n, d
    if n == d:
        return p_const(1), p_const(1)
    common = _mono_gcd(p_mono_content(n), p_mono_content(d))
    if common:
        n = {mono_div(m, common): c for m, c in n.items()}
        d = {mono_div(m, common): c for m, c in d.items()}
    return n, d


def _mono_gcd(a, b):
    db = dict(b)
    out = []
    for g, e in a:
        f = db.get(g)
        if f:
            out.append((g, min(e, f)))
    return tuple(out)


def make(num, den):
    """Normalise ``num / den`` into canonical form."""
    if not num:
        return ZERO
    if not den:
        raise ZeroDivisionError("division by an identically zero expression")
    if p_is_const(den):
        c = den[_ONE_MONO]
        return _special(RatFunc(p_scale(num, 1 / c) if c != 1 else num, p_const(1)))
    common = _mono_gcd(p_mono_content(num), p_mono_content(den))
    if common:
        num = {mono_div(m, common): c for m, c in num.items()}
        den = {mono_div(m, common): c for m, c in den.items()}
    lc = den[p_lead(den)]
    if lc != 1:
        inv = 1 / lc
        num = p_scale(num, inv)
        den = p_scale(den, inv)
    if p_is_const(den):
        return _special(RatFunc(num, p_const(1)))
    if len(den) > 1:
        q = p_divexact(num, den)
        if q is not None:
            return _special(RatFunc(q, p_const(1)))
    return _special(RatFunc(num, den))


def _special(r):
    """Apply ``sqrt(a)^2 -> a``."""
    if not (_has_sqrt_square(r.num) or _has_sqrt_square(r.den)):
        return r
    return _reduce_sqrt(r.num) / _reduce_sqrt(r.den)


def _has_sqrt_square(p):
    for m in p:
        for g, e in m:
            if e >= 2 and isinstance(g, Func) and g.fname == "sqrt":
                return True
    return False


def _reduce_sqrt(p):
    total = ZERO
    for m, c in p.items():
        term = RatFunc.const(c)
        rest = []
        for g, e in m:
            if isinstance(g, Func) and g.fname == "sqrt" and e >= 2:
                term = term * canon(g.arg).pow(e // 2)
                if e % 2:
                    rest.append((g, 1))
            else:
                rest.append((g, e))
        term = term * RatFunc({tuple(rest): Fraction(1)}, p_const(1))
        total = total + term
    return total


ZERO = RatFunc({}, p_const(1))
ONE = RatFunc(p_const(1), p_const(1))


# --- atoms --------------------------------------------------------------------

def make_func(fname, arg: RatFunc) -> RatFunc:
    """Canonical ``fname(arg)`` with a few exact rewrites.

    * constant folding where the value is rational (``exp(0)``, ``log(1)``,
      ``sin(0)``, ``cos(0)``, ``sqrt`` of a rational square);
    * ``exp(k*log(a) + r) -> a^k * exp(r)`` for integer ``k``;
    * sign normalisation: ``exp(-a) -> 1/exp(a)``, ``sin(-a) -> -sin(a)``,
      ``cos(-a) -> cos(a)`` when the leading coefficient of ``a`` is negative.
    """
    c = arg.const_value
    if c is not None:
        if c == 0:
            if fname in ("exp", "cos"):
                return ONE
            if fname in ("sin", "sqrt"):
                return ZERO
        if fname == "log" and c == 1:
            return ZERO
        if fname == "sqrt" and c > 0:
            n, d = c.numerator, c.denominator
            rn, rd = isqrt(n), isqrt(d)
            if rn * rn == n and rd * rd == d:
                return RatFunc.const(Fraction(rn, rd))
    if fname == "exp" and arg.is_polynomial:
        factor = ONE
        rest = {}
        for m, k in arg.num.items():
            if (len(m) == 1 and m[0][1] == 1 and isinstance(m[0][0], Func)
                    and m[0][0].fname == "log" and k.denominator == 1):
                factor = factor * canon(m[0][0].arg).pow(int(k))
            else:
                rest[m] = k
        if factor is not ONE:
            return factor * make_func("exp", RatFunc(rest, p_const(1)))
    if fname in ("exp", "sin", "cos") and _leading_negative(arg):
        inner = _atom(fname, -arg)
        if fname == "exp":
            return ONE / inner
        if fname == "sin":
            return -inner
        return inner
    return _atom(fname, arg)


def _leading_negative(r):
    if not r.num:
        return False
    return r.num[p_lead(r.num)] < 0


def _atom(fname, arg):
    node = Func(fname, to_tree(arg))
    node._rf = RatFunc.gen(node)
    return node._rf


# --- conversion -----------------------------------------------------------------

def canon(e: Expr) -> RatFunc:
    """Canonical form of ``e`` (cached on the node)."""
    r = e._rf
    if r is not None:
        return r
    if isinstance(e, Const):
        r = RatFunc.const(e.value)
    elif isinstance(e, Sym):
        r = RatFunc.gen(e)
    elif isinstance(e, Add):
        r = ZERO
        for t in e.terms:
            r = r + canon(t)
    elif isinstance(e, Mul):
        r = ONE
        for f in e.factors:
            r = r * canon(f)
    elif isinstance(e, Div):
        r = canon(e.num) / canon(e.den)
    elif isinstance(e, Pow):
        r = canon(e.base).pow(e.exp)
    elif isinstance(e, Func):
        r = make_func(e.fname, canon(e.arg))
    else:
        raise TypeError(f"unknown node {type(e).__name__}")
    e._rf = r
    return r


def poly_to_tree(p) -> Expr:
    if not p:
        return ZERO_NODE
    terms = []
    for m, c in p_sorted(p):
        factors = [g if e == 1 else Pow(g, e) for g, e in m]
        if not factors:
            terms.append(Const(c))
        elif c == 1:
            terms.append(factors[0] if len(factors) == 1 else Mul(factors))
        else:
            terms.append(Mul([Const(c)] + factors))
    return terms[0] if len(terms) == 1 else Add(terms)


def to_tree(r: RatFunc) -> Expr:
    """Tree for a canonical form; ``canon`` of the result is ``r`` itself."""
    if not r.num:
        return ZERO_NODE
    if p_is_const(r.den):
        c = p_const_value(r.num)
        if c is not None:
            node = ONE_NODE if c == 1 else Const(c)
        else:
            node = poly_to_tree(r.num)
    else:
        node = Div(poly_to_tree(r.num), poly_to_tree(r.den))
    if node._rf is None:
        node._rf = r
    return node


def simplify(e: Expr) -> Expr:
    return to_tree(canon(e))


# --- differentiation ----------------------------------------------------------

def _atom_derivative(g: Func, name: str) -> RatFunc:
    cache = g._dcache
    if cache is None:
        cache = g._dcache = {}
    hit = cache.get(("rf", name))
    if hit is not None:
        return hit
    a = canon(g.arg)
    da = derivative(a, name)
    self_rf = RatFunc.gen(g)
    if da.is_zero:
        out = ZERO
    elif g.fname == "exp":
        out = self_rf * da
    elif g.fname == "log":
        out = da / a
    elif g.fname == "sin":
        out = make_func("cos", a) * da
    elif g.fname == "cos":
        out = -(make_func("sin", a) * da)
    else:  # sqrt
        out = da / (RatFunc.const(2) * self_rf)
    cache[("rf", name)] = out
    return out


def p_derivative(p, name) -> RatFunc:
    direct = {}
    extra = ZERO
    for m, c in p.items():
        for i, (g, e) in enumerate(m):
            if name not in g.free_symbols:
                continue
            rest = m[:i] + ((g, e - 1),) + m[i + 1:] if e > 1 else m[:i] + m[i + 1:]
            if isinstance(g, Func):
                extra = extra + RatFunc({rest: c * e}, p_const(1)) * _atom_derivative(g, name)
            elif not isinstance(g, Param) and g.name == name:
                v = direct.get(rest, 0) + c * e
                if v:
                    direct[rest] = v
                else:
                    direct.pop(rest, None)
    return make(direct, p_const(1)) + extra if direct else extra


def derivative(r: RatFunc, name: str) -> RatFunc:
    dn = p_derivative(r.num, name)
    if p_is_const(r.den):
        return dn
    dd = p_derivative(r.den, name)
    if dd.is_zero:
        return dn * RatFunc(p_const(1), r.den)._flip_normal()
    n = RatFunc(r.num, p_const(1))
    d = RatFunc(r.den, p_const(1))
    return (dn * d - n * dd) / d.pow(2)


def substitute_rf(r: RatFunc, mapping) -> RatFunc:
    """Replace symbols (by name) with canonical forms."""
    return _subs_poly(r.num, mapping) / _subs_poly(r.den, mapping)


def _subs_poly(p, mapping):
    out = ZERO
    for m, c in p.items():
        term = RatFunc.const(c)
        for g, e in m:
            if isinstance(g, Func):
                if g.free_symbols & mapping.keys():
                    gr = make_func(g.fname, substitute_rf(canon(g.arg), mapping))
                else:
                    gr = RatFunc.gen(g)
            elif g.name in mapping:
                gr = mapping[g.name]
            else:
                gr = RatFunc.gen(g)
            term = term * gr.pow(e)
        out = out + term
    return out
