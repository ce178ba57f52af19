"""Lightlike vector fields: frames, optical scalars and totally geodesic tests.

For a lightlike field ``V`` the orthogonal distribution ``V^perp`` contains
``V``.  We complete ``V`` to a frame ``(V, E_1..E_{d-2}, U)`` with
``g(V, U) = 1``, ``g(U, U) = 0`` and ``g(U, E_a) = g(V, E_a) = 0``.  The
screen fields ``E_a`` span a complement of ``V`` inside ``V^perp``.

Checks run against that frame:

* Frobenius: ``g([W1, W2], V) == 0`` for all ``W1, W2`` in ``{V, E_a}``.
* Optical matrix ``B_ab = g(nabla_{E_a} V, E_b)`` split into twist
  (antisymmetric), shear (trace-free symmetric) and expansion (trace).
* Transverse metric preserved: ``(L_V g)(W1, W2) == 0`` on ``{V, E_a}``.
* Parallel line: ``nabla_W V = alpha(W) V`` with ``alpha(W) = g(nabla_W V, U)``.

The last two are equivalent characterizations of a totally geodesic
``V^perp`` when it is integrable; :func:`analyze` insists that they agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateAtBasePoint, TotallyGeodesicMismatch, NotLightlike, RequiresIntegrability
from .expr import to_tree
from .expr.ratfunc import ONE as RF_ONE
from .expr.ratfunc import ZERO as RF_ZERO
from .geometry import (HALF, Metric, VectorField, _cofactors, _det, covariant_derivative,
                       lie_bracket, lie_derivative_metric, rf)


def _matmul_pair(M, X, Y):
    """``X^i M_ij Y^j`` for a matrix of canonical forms."""
    acc = RF_ZERO
    d = len(M)
    for i in range(d):
        if X.rf[i].is_zero:
            continue
        for j in range(d):
            if not Y.rf[j].is_zero and not M[i][j].is_zero:
                acc = acc + X.rf[i] * M[i][j] * Y.rf[j]
    return acc


def _sym_inverse(m):
    """Inverse of a small symmetric matrix of canonical forms."""
    n = len(m)
    if n == 0:
        return []
    det = _det(m)
    cof = _cofactors(m)
    inv_det = RF_ONE / det
    return [[cof[j][i] * inv_det for j in range(n)] for i in range(n)]


class NullCongruence:
    """A lightlike field with its transversal ``U`` and screen frame ``E``."""

    def __init__(self, g: Metric, V: VectorField, U: VectorField, E, pivot=None):
        self.g = g
        self.V = V
        self.U = U
        self.E = list(E)
        self.pivot = pivot
        self.gram = [[g.inner(a, b) for b in self.E] for a in self.E]
        self._gram_inv = None

    @property
    def chart(self):
        return self.g.chart

    @property
    def frame(self):
        """``[V, E_1, ..., E_{d-2}]``: a frame of ``V^perp``."""
        return [self.V] + self.E

    def gram_inverse(self):
        if self._gram_inv is None:
            self._gram_inv = _sym_inverse(self.gram)
        return self._gram_inv

    def invariant_residuals(self):
        """Expressions that must vanish identically for a valid congruence."""
        g = self.g
        out = [g.inner(self.V, self.V), g.inner(self.U, self.U), g.inner(self.V, self.U) - RF_ONE]
        for e in self.E:
            out += [g.inner(self.V, e), g.inner(self.U, e)]
        return out

    def with_screen(self, screen):
        """Same ``V`` with a user supplied screen; ``U`` is recomputed to stay orthogonal."""
        return _custom_screen(self, list(screen))


def build_congruence(g: Metric, V: VectorField, screen=None) -> NullCongruence:
    """Construct ``U`` and a screen frame by elimination on the covector ``g(V, .)``.

    The pivot is the coordinate where ``g(V, .)`` is largest in absolute value
    at the base point.  Raises ``NotLightlike`` or ``DegenerateAtBasePoint``.
    """
    chart = g.chart
    d = chart.dim
    if not chart.zero(g.inner(V, V)):
        raise NotLightlike(f"g(V, V) = {to_tree(g.inner(V, V))} is not identically zero")
    vb = V.at_base()
    if np.max(np.abs(vb)) < 1e-12:
        raise DegenerateAtBasePoint("V vanishes at the base point")
    omega = g.lower(V)
    ob = chart.eval_at(omega)
    p = int(np.argmax(np.abs(ob)))
    if abs(ob[p]) < 1e-12:
        raise DegenerateAtBasePoint("g(V, .) vanishes at the base point")
    # F_i = d_i - (omega_i / omega_p) d_p spans V^perp (i != p)
    F = {}
    for i in range(d):
        if i == p:
            continue
        comps = [RF_ZERO] * d
        comps[i] = RF_ONE
        comps[p] = -(omega[i] / omega[p])
        F[i] = VectorField(chart, comps)
    # V = sum_{i != p} V^i F_i, so drop the F_q with the largest |V^q|
    cand = [i for i in range(d) if i != p]
    q = max(cand, key=lambda i: abs(vb[i]))
    if abs(vb[q]) < 1e-12:
        raise DegenerateAtBasePoint("no screen pivot with nonzero V component")
    U0 = VectorField.coordinate(chart, chart.coords[p]).scaled(RF_ONE / omega[p])
    U = U0 - V.scaled(HALF * g.inner(U0, U0))
    E = []
    for i in cand:
        if i == q:
            continue
        Fi = F[i]
        E.append(Fi - V.scaled(g.inner(Fi, U)))
    c = NullCongruence(g, V, U, E, pivot=chart.coords[p])
    _check_gram(c)
    if screen is not None:
        c = _custom_screen(c, list(screen))
    return c


def _check_gram(c):
    if not c.E:
        return
    vals = c.chart.eval_at([x for row in c.gram for x in row]).reshape(len(c.E), len(c.E))
    ev = np.linalg.eigvalsh(vals)
    if np.min(ev) <= 1e-12 * max(1.0, float(np.max(np.abs(ev)))):
        raise DegenerateAtBasePoint("screen Gram matrix is not positive definite at the base point")


def _custom_screen(c: NullCongruence, screen):
    g, V = c.g, c.V
    if len(screen) != len(c.E):
        raise DegenerateAtBasePoint(f"screen needs {len(c.E)} fields, got {len(screen)}")
    for e in screen:
        if not c.chart.zero(g.inner(V, e)):
            raise DegenerateAtBasePoint("screen field is not orthogonal to V")
    tmp = NullCongruence(g, V, c.U, screen, pivot=c.pivot)
    _check_gram(tmp)
    Ginv = tmp.gram_inverse()
    r = [g.inner(c.U, e) for e in screen]
    n = len(screen)
    y = [-sum((Ginv[a][b] * r[b] for b in range(n)), RF_ZERO) for a in range(n)]
    W = c.U
    for a in range(n):
        W = W + screen[a].scaled(y[a])
    z = -(HALF * g.inner(W, W))
    U = W + V.scaled(z)
    out = NullCongruence(g, V, U, screen, pivot=c.pivot)
    out._gram_inv = Ginv
    return out


# --- individual checks -------------------------------------------------------

@dataclass
class GeodesicResult:
    geodesic: bool
    pre_geodesic: bool
    kappa: object  # expression with nabla_V V = kappa V, None when not pre-geodesic

    def __bool__(self):
        return self.geodesic


def is_geodesic_field(g: Metric, V: VectorField, c: NullCongruence | None = None) -> GeodesicResult:
    """Whether ``nabla_V V`` vanishes, and whether it is a multiple of ``V``."""
    if c is None:
        c = build_congruence(g, V)
    acc = covariant_derivative(g, V, V)
    chart = g.chart
    geodesic = all(chart.zero(x) for x in acc.rf)
    if geodesic:
        return GeodesicResult(True, True, to_tree(RF_ZERO))
    kappa = g.inner(acc, c.U)
    rest = acc - V.scaled(kappa)
    pre = all(chart.zero(x) for x in rest.rf)
    return GeodesicResult(False, pre, to_tree(kappa) if pre else None)


def frobenius_residuals(c: NullCongruence):
    """``g([W1, W2], V)`` for all pairs ``W1 < W2`` of the frame of ``V^perp``."""
    fr = c.frame
    out = {}
    for a in range(len(fr)):
        for b in range(a + 1, len(fr)):
            out[(a, b)] = c.g.inner(lie_bracket(fr[a], fr[b]), c.V)
    return out


def is_twist_free(c: NullCongruence) -> bool:
    """Frobenius integrability of ``V^perp``."""
    return all(c.chart.zero(x) for x in frobenius_residuals(c).values())


@dataclass
class OpticalData:
    B: list
    gram: list
    expansion: object
    shear: list
    twist: list
    cross_identity: bool
    advisory: bool = False

    def tree(self, name):
        m = getattr(self, name)
        if isinstance(m, list):
            return [[to_tree(x) for x in row] for row in m]
        return to_tree(m)


def optical_scalars(c: NullCongruence, geodesic=True) -> OpticalData:
    """``B_ab = g(nabla_{E_a} V, E_b)`` with its trace, shear and twist parts."""
    g, V, E = c.g, c.V, c.E
    n = len(E)
    nablaV = [covariant_derivative(g, e, V) for e in E]
    B = [[g.inner(nablaV[a], E[b]) for b in range(n)] for a in range(n)]
    Ginv = c.gram_inverse()
    theta = RF_ZERO
    for a in range(n):
        for b in range(n):
            if not Ginv[a][b].is_zero and not B[a][b].is_zero:
                theta = theta + Ginv[a][b] * B[a][b]
    twist = [[HALF * (B[a][b] - B[b][a]) for b in range(n)] for a in range(n)]
    share = theta / rf(n) if n else RF_ZERO
    shear = [[HALF * (B[a][b] + B[b][a]) - share * c.gram[a][b] for b in range(n)] for a in range(n)]
    L = lie_derivative_metric(g, V)
    cross = all(c.chart.zero(B[a][b] + B[b][a] - _matmul_pair(L, E[a], E[b]))
                for a in range(n) for b in range(a, n))
    return OpticalData(B, c.gram, theta, shear, twist, cross, advisory=not geodesic)


def tg_item2(c: NullCongruence, twist_free=None) -> bool:
    """``V`` preserves the degenerate metric on ``V^perp``: ``L_V g`` vanishes on the frame."""
    if twist_free is None:
        twist_free = is_twist_free(c)
    if not twist_free:
        raise RequiresIntegrability("V^perp is not integrable")
    L = lie_derivative_metric(c.g, c.V)
    fr = c.frame
    return all(c.chart.zero(_matmul_pair(L, fr[a], fr[b]))
               for a in range(len(fr)) for b in range(a, len(fr)))


def tg_item4(c: NullCongruence):
    """``nabla_W V = alpha(W) V`` for ``W`` in the frame of ``V^perp``.

    Returns ``(holds, alpha)`` where ``alpha`` maps frame labels (``"V"``,
    ``"E1"``..., ``"U"``) to ``g(nabla_W V, U)``.
    """
    g, V, U = c.g, c.V, c.U
    labels = ["V"] + [f"E{a + 1}" for a in range(len(c.E))]
    holds = True
    alpha = {}
    for name, W in zip(labels, c.frame):
        nW = covariant_derivative(g, W, V)
        a = g.inner(nW, U)
        alpha[name] = a
        if holds:
            rest = nW - V.scaled(a)
            holds = all(c.chart.zero(x) for x in rest.rf)
    alpha["U"] = g.inner(covariant_derivative(g, U, V), U)
    return holds, alpha


@dataclass
class CongruenceReport:
    lightlike: bool
    geodesic: bool
    pre_geodesic: bool
    kappa: object
    twist_free: bool
    shear_free: bool
    divergence_free: bool
    tg_item2: object  # None when V^perp is not integrable
    tg_item4: bool
    locally_kundt: bool
    kundt: bool
    alpha: dict
    notes: list = field(default_factory=list)
    optical: OpticalData | None = None

    def booleans(self):
        return {k: getattr(self, k) for k in (
            "lightlike", "geodesic", "pre_geodesic", "twist_free", "shear_free",
            "divergence_free", "tg_item2", "tg_item4", "locally_kundt", "kundt")}

    def as_dict(self):
        out = self.booleans()
        out["kappa"] = None if self.kappa is None else str(self.kappa)
        out["alpha"] = {k: str(v) for k, v in self.alpha.items()}
        out["notes"] = list(self.notes)
        return out


def analyze(g: Metric, V: VectorField, screen=None) -> CongruenceReport:
    """Run every check on ``(g, V)`` and assemble a consistent report."""
    c = build_congruence(g, V, screen)
    chart = g.chart
    notes = ["V is certified non-singular at the base point only"]
    geo = is_geodesic_field(g, V, c)
    twist_free = is_twist_free(c)
    opt = optical_scalars(c, geo.geodesic)
    if not opt.cross_identity:
        notes.append("optical cross-identity failed")
    n = len(c.E)
    twist_zero = all(chart.zero(opt.twist[a][b]) for a in range(n) for b in range(a + 1, n))
    shear_free = all(chart.zero(opt.shear[a][b]) for a in range(n) for b in range(a, n))
    div_free = chart.zero(opt.expansion)
    if twist_zero != twist_free:
        notes.append("screen twist and Frobenius test disagree (V is not pre-geodesic)")
    if not geo.geodesic:
        notes.append("optical scalars are advisory: V is not geodesic")
    item2 = tg_item2(c, twist_free) if twist_free else None
    item4, alpha = tg_item4(c)
    if twist_free and item2 != item4:
        raise TotallyGeodesicMismatch(f"L_V g test gives {item2}, parallel line test gives {item4}")
    locally = twist_free and item4
    kundt = geo.geodesic and locally
    return CongruenceReport(
        lightlike=True, geodesic=geo.geodesic, pre_geodesic=geo.pre_geodesic, kappa=geo.kappa,
        twist_free=twist_free, shear_free=shear_free, divergence_free=div_free,
        tg_item2=item2, tg_item4=item4, locally_kundt=locally, kundt=kundt,
        alpha={k: to_tree(v) for k, v in alpha.items()}, notes=notes, optical=opt)
