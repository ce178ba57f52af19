"""Charts, Lorentzian metrics and coordinate tensor calculus.

Internally every component is kept as a canonical rational form (``RatFunc``)
so that sums of many products cancel exactly; public accessors return
expression trees.

Index conventions, used throughout the package:

* ``gamma[k][i][j]`` is the Levi-Civita symbol with
  ``Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)``.
* ``R[l][k][i][j]`` is defined by ``R(d_i, d_j) d_k = R^l_kij d_l`` where
  ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``, so
  ``R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk
  - Gamma^l_jm Gamma^m_ik``.
* The lowered tensor is ``R_abcd = g_am R^m_bcd``.  A space of constant
  sectional curvature ``K`` has ``R_abcd = K (g_ac g_bd - g_ad g_bc)``.
"""

from __future__ import annotations

import numpy as np

from . import _backend
from .errors import ChartMismatch, DomainError, EvalError, InvalidMetric, SingularMetric
from .expr import Param, Parser, Program, Sym, as_expr, canon, to_tree
from .expr.evaluate import error_message
from .expr.ratfunc import ONE as RF_ONE
from .expr.ratfunc import ZERO as RF_ZERO
from .expr.ratfunc import RatFunc, derivative
from .expr.zero import DEFAULT_HALF_WIDTH, default_box, is_zero_rf

MAX_DIM = 6
HALF = RatFunc.const(1) / RatFunc.const(2)


def rf(x) -> RatFunc:
    """Canonical form of an expression, number or existing form."""
    if isinstance(x, RatFunc):
        return x
    return canon(as_expr(x))


class Chart:
    """Coordinate names, domain constraints, a base point and parameter values.

    ``constraints`` maps a coordinate to ``("positive",)`` or
    ``("interval", lo, hi)``.  ``params`` maps parameter names to the values
    used at the base point; in zero tests parameters are sampled like
    coordinates.  ``seed`` and ``box`` configure the randomized zero test.
    """

    def __init__(self, coords, constraints=None, base=None, params=None, seed=0, box=None):
        coords = tuple(coords)
        if len(set(coords)) != len(coords):
            raise InvalidMetric(f"coordinate names are not distinct: {coords}")
        if not 1 <= len(coords) <= MAX_DIM:
            raise InvalidMetric(f"chart dimension must be between 1 and {MAX_DIM}")
        self.coords = coords
        self.dim = len(coords)
        self.constraints = dict(constraints or {})
        self.params = dict(params or {})
        for n in self.params:
            if n in coords:
                raise InvalidMetric(f"{n} is both a coordinate and a parameter")
        for n in self.constraints:
            if n not in coords:
                raise InvalidMetric(f"constraint on unknown coordinate {n}")
        self.seed = int(seed)
        self.box_override = box
        base = dict(base or {})
        for c in coords:
            if c not in base:
                base[c] = self._default_base(c)
        self.base = {c: float(base[c]) for c in coords}
        for c in coords:
            if not self.satisfies(c, self.base[c]):
                raise DomainError(f"base point {c}={self.base[c]} violates the constraint on {c}")
        self.box = self._make_box()
        self.index = {c: i for i, c in enumerate(coords)}

    def _default_base(self, c):
        con = self.constraints.get(c)
        if con is None:
            return 0.0
        if con[0] == "positive":
            return 1.0
        return 0.5 * (float(con[1]) + float(con[2]))

    def satisfies(self, c, value):
        con = self.constraints.get(c)
        if con is None:
            return True
        if con[0] == "positive":
            return value > 0
        return float(con[1]) < value < float(con[2])

    def _make_box(self):
        box = default_box(self.coords, self.constraints)
        if self.box_override is not None:
            lo, hi = self.box_override
            for c in self.coords:
                blo, bhi = lo, hi
                con = self.constraints.get(c)
                if con is not None and con[0] == "positive":
                    blo = max(blo, 0.1 * min(1.0, hi))
                elif con is not None:
                    blo, bhi = max(blo, float(con[1])), min(bhi, float(con[2]))
                if blo < bhi:
                    box[c] = (blo, bhi)
        for p in self.params:
            box[p] = (-DEFAULT_HALF_WIDTH, DEFAULT_HALF_WIDTH)
        return box

    def bounds(self):
        """Open domain per coordinate as ``(lo, hi)`` arrays, for integration."""
        lo = np.full(self.dim, -np.inf)
        hi = np.full(self.dim, np.inf)
        for c, con in self.constraints.items():
            i = self.coords.index(c)
            if con[0] == "positive":
                lo[i] = 0.0
            else:
                lo[i], hi[i] = float(con[1]), float(con[2])
        return lo, hi

    def with_options(self, seed=None, box=None):
        return Chart(self.coords, self.constraints, self.base, self.params,
                     self.seed if seed is None else seed,
                     self.box_override if box is None else box)

    # symbols and parsing --------------------------------------------------
    def sym(self, name):
        if name in self.params:
            return Param(name)
        if name not in self.index:
            raise ChartMismatch(f"{name} is not a coordinate of this chart")
        return Sym(name)

    def syms(self):
        return tuple(Sym(c) for c in self.coords)

    def parse(self, text):
        return Parser(self.coords, tuple(self.params)).parse(text)

    # zero test and evaluation --------------------------------------------
    def zero(self, e, seed=None) -> bool:
        """Identically zero on the chart box (exact for rational input)."""
        return is_zero_rf(rf(e), self.box, self.seed if seed is None else seed)

    def base_env(self):
        env = dict(self.base)
        env.update({k: float(v) for k, v in self.params.items()})
        return env

    def eval_at(self, exprs, point=None):
        """Values of several forms or trees at ``point`` (default: base point)."""
        env = self.base_env()
        if point is not None:
            env.update(point)
        trees = [to_tree(rf(e)) for e in exprs]
        names = sorted(set().union(*(t.free_symbols for t in trees))) if trees else []
        missing = [n for n in names if n not in env]
        if missing:
            raise EvalError(f"no value for {missing}")
        prog = Program(trees, names)
        out, _, err = prog.run(np.array([[env[n] for n in names]]))
        if err[0]:
            raise EvalError(f"evaluation failed: {error_message(int(err[0]))}")
        return out[0]

    def same(self, other):
        return self is other or (self.coords == other.coords and self.constraints == other.constraints)

    def __repr__(self):
        return f"Chart({', '.join(self.coords)})"


class VectorField:
    """Contravariant components over a chart."""

    def __init__(self, chart: Chart, components):
        comps = tuple(rf(c) for c in components)
        if len(comps) != chart.dim:
            raise ChartMismatch(f"expected {chart.dim} components, got {len(comps)}")
        self.chart = chart
        self.rf = comps

    @classmethod
    def coordinate(cls, chart, name):
        i = chart.index[name]
        return cls(chart, [RF_ONE if k == i else RF_ZERO for k in range(chart.dim)])

    @property
    def components(self):
        return tuple(to_tree(c) for c in self.rf)

    def __add__(self, other):
        _check_chart(self, other)
        return VectorField(self.chart, [a + b for a, b in zip(self.rf, other.rf)])

    def __sub__(self, other):
        _check_chart(self, other)
        return VectorField(self.chart, [a - b for a, b in zip(self.rf, other.rf)])

    def __neg__(self):
        return VectorField(self.chart, [-a for a in self.rf])

    def scaled(self, f):
        f = rf(f)
        return VectorField(self.chart, [f * a for a in self.rf])

    def apply(self, f):
        """Directional derivative ``X(f)`` of a scalar."""
        f = rf(f)
        acc = RF_ZERO
        for c, x in zip(self.chart.coords, self.rf):
            if not x.is_zero:
                acc = acc + x * derivative(f, c)
        return acc

    def is_zero(self):
        return all(self.chart.zero(c) for c in self.rf)

    def at_base(self):
        return self.chart.eval_at(self.rf)

    def __repr__(self):
        return "VectorField(" + ", ".join(str(c) for c in self.components) + ")"


def _check_chart(a, b):
    if not a.chart.same(b.chart):
        raise ChartMismatch(f"{a.chart!r} and {b.chart!r} differ")


class Metric:
    """Symmetric matrix of expressions that is Lorentzian at the base point."""

    def __init__(self, chart: Chart, matrix, check=True):
        d = chart.dim
        if len(matrix) != d or any(len(row) != d for row in matrix):
            raise InvalidMetric(f"metric must be {d}x{d}")
        m = [[rf(x) for x in row] for row in matrix]
        for i in range(d):
            for j in range(i + 1, d):
                if m[i][j] != m[j][i]:
                    raise InvalidMetric(f"entries ({chart.coords[i]},{chart.coords[j]}) are not symmetric")
        self.chart = chart
        self.rf = tuple(tuple(row) for row in m)
        self._det = self._inv = self._dg = self._gamma = self._riemann = None
        if check:
            self._validate()

    @classmethod
    def from_entries(cls, chart, entries, check=True):
        """Build from ``{(a, b): expr}`` with coordinate names; missing entries are 0."""
        d = chart.dim
        m = [[RF_ZERO] * d for _ in range(d)]
        for (a, b), e in entries.items():
            i, j = chart.index[a], chart.index[b]
            m[i][j] = m[j][i] = rf(e)
        return cls(chart, m, check)

    def _validate(self):
        if self.chart.zero(self.det()):
            raise SingularMetric("metric determinant vanishes identically")
        vals = self.chart.eval_at([x for row in self.rf for x in row])
        mat = vals.reshape(self.chart.dim, self.chart.dim)
        ev = np.linalg.eigvalsh(mat)
        scale = max(1.0, float(np.max(np.abs(ev))))
        if np.min(np.abs(ev)) <= 1e-12 * scale:
            raise SingularMetric("metric is degenerate at the base point")
        if int(np.sum(ev < 0)) != 1:
            raise InvalidMetric(f"signature at the base point is not Lorentzian (eigenvalues {ev.round(6).tolist()})")

    @property
    def dim(self):
        return self.chart.dim

    @property
    def matrix(self):
        return [[to_tree(x) for x in row] for row in self.rf]

    def entry(self, a, b):
        return to_tree(self.rf[self.chart.index[a]][self.chart.index[b]])

    def inner(self, X, Y) -> RatFunc:
        """``g(X, Y)`` as a canonical form."""
        acc = RF_ZERO
        d = self.dim
        for i in range(d):
            xi = X.rf[i]
            if xi.is_zero:
                continue
            for j in range(d):
                if not Y.rf[j].is_zero and not self.rf[i][j].is_zero:
                    acc = acc + xi * self.rf[i][j] * Y.rf[j]
        return acc

    def lower(self, X):
        """Covector components ``g_ij X^j``."""
        d = self.dim
        out = []
        for i in range(d):
            acc = RF_ZERO
            for j in range(d):
                if not X.rf[j].is_zero and not self.rf[i][j].is_zero:
                    acc = acc + self.rf[i][j] * X.rf[j]
            out.append(acc)
        return out

    # cached tensors ---------------------------------------------------------
    def det(self):
        if self._det is None:
            self._det = _det(self.rf)
        return self._det

    def inverse_rf(self):
        if self._inv is None:
            self._inv = _inverse(self.rf, self.chart)
        return self._inv

    def dg(self):
        """``dg[l][i][j] = d_l g_ij``."""
        if self._dg is None:
            self._dg = [[[derivative(self.rf[i][j], c) for j in range(self.dim)]
                         for i in range(self.dim)] for c in self.chart.coords]
        return self._dg

    def gamma_rf(self):
        if self._gamma is None:
            self._gamma = _christoffel(self)
        return self._gamma

    def riemann_rf(self):
        if self._riemann is None:
            self._riemann = _riemann(self.gamma_rf(), self.chart)
        return self._riemann

    def __repr__(self):
        return f"Metric({self.chart!r})"


# --- linear algebra on canonical forms -------------------------------------------

def _minors(m):
    """Memoized minors of ``m``: ``minor(rows, cols)`` with index tuples."""
    memo = {}

    def minor(rows, cols):
        # expand along the first listed row
        if not rows:
            return RF_ONE
        key = (rows, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        r0 = rows[0]
        acc = RF_ZERO
        for k, c in enumerate(cols):
            a = m[r0][c]
            if a.is_zero:
                continue
            sub = minor(rows[1:], cols[:k] + cols[k + 1:])
            if sub.is_zero:
                continue
            term = a * sub
            acc = acc - term if k % 2 else acc + term
        memo[key] = acc
        return acc

    return minor


def _det(m):
    full = tuple(range(len(m)))
    return _minors(m)(full, full)


def _cofactors(m):
    n = len(m)
    full = tuple(range(n))
    minor = _minors(m)
    cof = [[None] * n for _ in range(n)]
    for i in range(n):
        rows = full[:i] + full[i + 1:]
        for j in range(n):
            c = minor(rows, full[:j] + full[j + 1:])
            cof[i][j] = -c if (i + j) % 2 else c
    return cof


def _inverse(m, chart):
    det = _det(m)
    if chart.zero(det):
        raise SingularMetric("metric determinant vanishes identically")
    cof = _cofactors(m)
    n = len(m)
    inv_det = RF_ONE / det
    return tuple(tuple(cof[j][i] * inv_det for j in range(n)) for i in range(n))


def inverse_metric(g: Metric):
    """Inverse matrix ``g^ij`` as expression trees (adjugate over determinant)."""
    return [[to_tree(x) for x in row] for row in g.inverse_rf()]


# --- connection and curvature ------------------------------------------------

class ConnectionCoefficients:
    """``Gamma^k_ij`` of a metric; ``gamma[k][i][j]`` are expression trees."""

    def __init__(self, chart, gamma_rf):
        self.chart = chart
        self.rf = gamma_rf

    @property
    def gamma(self):
        d = self.chart.dim
        return [[[to_tree(self.rf[k][i][j]) for j in range(d)] for i in range(d)] for k in range(d)]

    def component(self, k, i, j):
        ix = self.chart.index
        return to_tree(self.rf[ix[k]][ix[i]][ix[j]])


class RiemannTensor:
    """``R^l_kij`` with ``R(d_i, d_j) d_k = R^l_kij d_l``."""

    def __init__(self, chart, r_rf):
        self.chart = chart
        self.rf = r_rf

    def component(self, l, k, i, j):
        ix = self.chart.index
        return to_tree(self.rf[ix[l]][ix[k]][ix[i]][ix[j]])

    def is_flat(self):
        d = self.chart.dim
        return all(self.chart.zero(self.rf[l][k][i][j])
                   for l in range(d) for k in range(d) for i in range(d) for j in range(i + 1, d))


def _christoffel(g: Metric):
    d = g.dim
    inv = g.inverse_rf()
    dg = g.dg()
    # first kind: [ij, l] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    first = [[[None] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            for l in range(d):
                s = dg[i][j][l] + dg[j][i][l] - dg[l][i][j]
                first[i][j][l] = first[j][i][l] = s * HALF if not s.is_zero else RF_ZERO
    gam = [[[RF_ZERO] * d for _ in range(d)] for _ in range(d)]
    for k in range(d):
        for i in range(d):
            for j in range(i, d):
                acc = RF_ZERO
                for l in range(d):
                    if not inv[k][l].is_zero and not first[i][j][l].is_zero:
                        acc = acc + inv[k][l] * first[i][j][l]
                gam[k][i][j] = gam[k][j][i] = acc
    return gam


def christoffel(g: Metric) -> ConnectionCoefficients:
    return ConnectionCoefficients(g.chart, g.gamma_rf())


def _riemann(gam, chart):
    d = chart.dim
    coords = chart.coords
    dgam = {}

    def dG(c, l, j, k):
        key = (c, l, j, k)
        v = dgam.get(key)
        if v is None:
            v = derivative(gam[l][j][k], coords[c]) if not gam[l][j][k].is_zero else RF_ZERO
            dgam[key] = v
        return v

    R = [[[[RF_ZERO] * d for _ in range(d)] for _ in range(d)] for _ in range(d)]
    for l in range(d):
        for k in range(d):
            for i in range(d):
                for j in range(d):
                    if i == j:
                        continue
                    acc = dG(i, l, j, k) - dG(j, l, i, k)
                    for m in range(d):
                        a, b = gam[l][i][m], gam[m][j][k]
                        if not a.is_zero and not b.is_zero:
                            acc = acc + a * b
                        a, b = gam[l][j][m], gam[m][i][k]
                        if not a.is_zero and not b.is_zero:
                            acc = acc - a * b
                    R[l][k][i][j] = acc
    return R


def riemann(g: Metric) -> RiemannTensor:
    return RiemannTensor(g.chart, g.riemann_rf())


def lowered_riemann(g: Metric):
    """``R_abcd = g_am R^m_bcd`` as canonical forms."""
    d = g.dim
    R = g.riemann_rf()
    out = [[[[RF_ZERO] * d for _ in range(d)] for _ in range(d)] for _ in range(d)]
    for a in range(d):
        for b in range(d):
            for c in range(d):
                for e in range(d):
                    acc = RF_ZERO
                    for m in range(d):
                        if not g.rf[a][m].is_zero and not R[m][b][c][e].is_zero:
                            acc = acc + g.rf[a][m] * R[m][b][c][e]
                    out[a][b][c][e] = acc
    return out


def constant_curvature_residuals(g: Metric, K):
    """``R_abcd - K (g_ac g_bd - g_ad g_bc)`` for every index tuple."""
    K = rf(K)
    low = lowered_riemann(g)
    d = g.dim
    m = g.rf
    return [low[a][b][c][e] - K * (m[a][c] * m[b][e] - m[a][e] * m[b][c])
            for a in range(d) for b in range(d) for c in range(d) for e in range(d)]


def has_constant_curvature(g: Metric, K) -> bool:
    return all(g.chart.zero(r) for r in constant_curvature_residuals(g, K))


# --- derivatives of fields -----------------------------------------------------

def covariant_derivative(g: Metric, X: VectorField, Y: VectorField) -> VectorField:
    """``(nabla_X Y)^k = X^i d_i Y^k + Gamma^k_ij X^i Y^j``."""
    _check_chart(X, Y)
    if not X.chart.same(g.chart):
        raise ChartMismatch("field and metric live on different charts")
    d = g.dim
    gam = g.gamma_rf()
    out = []
    for k in range(d):
        acc = X.apply(Y.rf[k])
        for i in range(d):
            if X.rf[i].is_zero:
                continue
            for j in range(d):
                if not Y.rf[j].is_zero and not gam[k][i][j].is_zero:
                    acc = acc + gam[k][i][j] * X.rf[i] * Y.rf[j]
        out.append(acc)
    return VectorField(g.chart, out)


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """``[X, Y]^k = X(Y^k) - Y(X^k)``."""
    _check_chart(X, Y)
    return VectorField(X.chart, [X.apply(yk) - Y.apply(xk) for xk, yk in zip(X.rf, Y.rf)])


def lie_derivative_metric(g: Metric, X: VectorField):
    """``(L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k`` as canonical forms."""
    if not X.chart.same(g.chart):
        raise ChartMismatch("field and metric live on different charts")
    d = g.dim
    coords = g.chart.coords
    dX = [[derivative(X.rf[k], c) for c in coords] for k in range(d)]  # dX[k][i] = d_i X^k
    out = [[RF_ZERO] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            acc = X.apply(g.rf[i][j])
            for k in range(d):
                if not g.rf[k][j].is_zero and not dX[k][i].is_zero:
                    acc = acc + g.rf[k][j] * dX[k][i]
                if not g.rf[i][k].is_zero and not dX[k][j].is_zero:
                    acc = acc + g.rf[i][k] * dX[k][j]
            out[i][j] = out[j][i] = acc
    return out


def lie_derivative_pair(g: Metric, X: VectorField, Y: VectorField, Z: VectorField) -> RatFunc:
    """``(L_X g)(Y, Z)`` evaluated through the Lie derivative matrix."""
    L = lie_derivative_metric(g, X)
    d = g.dim
    acc = RF_ZERO
    for i in range(d):
        if Y.rf[i].is_zero:
            continue
        for j in range(d):
            if not Z.rf[j].is_zero and not L[i][j].is_zero:
                acc = acc + Y.rf[i] * L[i][j] * Z.rf[j]
    return acc


def is_killing(g: Metric, X: VectorField, seed=None) -> bool:
    L = lie_derivative_metric(g, X)
    d = g.dim
    return all(g.chart.zero(L[i][j], seed) for i in range(d) for j in range(i, d))


# --- geodesics -------------------------------------------------------------

class GeodesicPath:
    """Sampled solution of the geodesic equation."""

    def __init__(self, times, points, velocities, status, message=""):
        self.times = times
        self.points = points
        self.velocities = velocities
        self.status = status
        self.message = message

    def norms(self, g: Metric):
        """``g(x', x')`` along the path."""
        d = g.dim
        chart = g.chart
        trees = [to_tree(x) for row in g.rf for x in row]
        names = list(chart.coords)
        env = {k: float(v) for k, v in chart.params.items()}
        trees = [_bind_params(t, env) for t in trees]
        prog = Program(trees, names)
        vals, _, err = prog.run(self.points)
        if err.any():
            raise EvalError("metric evaluation failed along the path")
        mats = vals.reshape(-1, d, d)
        return np.einsum("ni,nij,nj->n", self.velocities, mats, self.velocities)


def _bind_params(tree, env):
    if not env or not (tree.free_symbols & env.keys()):
        return tree
    from .expr import substitute
    return substitute(tree, {k: v for k, v in env.items() if k in tree.free_symbols})


def geodesic_program(g: Metric):
    """Compile the nonzero Christoffel symbols for the integrator.

    Returns ``(program, kidx, iidx, jidx)``; entry ``t`` contributes
    ``-value * v[i] * v[j]`` to the acceleration component ``k``.  Off-diagonal
    pairs are merged into one entry with a factor 2.
    """
    d = g.dim
    gam = g.gamma_rf()
    env = {k: float(v) for k, v in g.chart.params.items()}
    trees, ks, is_, js = [], [], [], []
    for k in range(d):
        for i in range(d):
            for j in range(i, d):
                c = gam[k][i][j]
                if c.is_zero:
                    continue
                if i != j:
                    c = c + c
                trees.append(_bind_params(to_tree(c), env))
                ks.append(k)
                is_.append(i)
                js.append(j)
    prog = Program(trees, g.chart.coords)
    idx = lambda a: np.asarray(a, dtype=np.int32)
    return prog, idx(ks), idx(is_), idx(js)


def integrate_geodesic(g: Metric, p0, v0, t_end, steps) -> GeodesicPath:
    """Classical fourth-order Runge-Kutta for ``x'' + Gamma(x', x') = 0``.

    ``p0`` is a mapping or a sequence in chart order.  Raises ``EvalError`` when
    the path leaves the chart domain or hits a singular point.
    """
    if steps < 16:
        raise ValueError("steps must be at least 16")
    chart = g.chart
    if isinstance(p0, dict):
        p0 = [p0[c] for c in chart.coords]
    x0 = np.asarray(p0, dtype=np.float64)
    v0 = np.asarray(v0, dtype=np.float64)
    if x0.shape != (chart.dim,) or v0.shape != (chart.dim,):
        raise ChartMismatch("initial data has the wrong dimension")
    for c, val in zip(chart.coords, x0):
        if not chart.satisfies(c, val):
            raise EvalError(f"initial point violates the constraint on {c}")
    prog, ks, is_, js = geodesic_program(g)
    lo, hi = chart.bounds()
    xs = np.zeros((steps + 1, chart.dim))
    vs = np.zeros((steps + 1, chart.dim))
    dt = float(t_end) / steps
    status, done = _backend.kernels.rk4_geodesic(
        prog.code, prog.consts, prog.starts, prog.stack_size, ks, is_, js,
        x0, v0, dt, int(steps), lo, hi, xs, vs)
    if status:
        raise EvalError(f"geodesic integration stopped at step {done}: {error_message(int(status))}")
    times = np.linspace(0.0, float(t_end), steps + 1)
    return GeodesicPath(times, xs, vs, status)


# --- numeric oracles (test support, also used by the catalog self-checks) ------

def metric_numeric(g: Metric):
    """Callable ``x -> g(x)`` as a float matrix."""
    d = g.dim
    env = {k: float(v) for k, v in g.chart.params.items()}
    trees = [_bind_params(to_tree(x), env) for row in g.rf for x in row]
    prog = Program(trees, g.chart.coords)

    def f(x):
        out, _, err = prog.run(np.asarray(x, dtype=np.float64).reshape(1, -1))
        if err[0]:
            raise EvalError(error_message(int(err[0])))
        return out[0].reshape(d, d)

    return f


def christoffel_numeric(g: Metric, x, h=1e-5):
    """Christoffel symbols at ``x`` from central differences of ``g``."""
    f = metric_numeric(g)
    x = np.asarray(x, dtype=np.float64)
    d = len(x)
    dg = np.empty((d, d, d))
    for l in range(d):
        e = np.zeros(d)
        e[l] = h
        dg[l] = (f(x + e) - f(x - e)) / (2 * h)
    inv = np.linalg.inv(f(x))
    # first[i][j][l] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    first = 0.5 * (dg[:, :, :] + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0))
    return np.einsum("kl,ijl->kij", inv, first)


def random_point(chart: Chart, rng, margin=0.0):
    """A point drawn uniformly from the chart box, shrunk by ``margin``."""
    out = []
    for c in chart.coords:
        lo, hi = chart.box[c]
        w = hi - lo
        out.append(rng.uniform(lo + margin * w, hi - margin * w))
    return np.array(out)

