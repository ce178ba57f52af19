"""Adapted Kundt coordinates and the classification ladder below them.

A metric is in *adapted form* with respect to roles ``(u, v, x_1..x_n)`` when

    g = 2 du dv + H du^2 + sum_i W_i du dx^i + sum_ij h_ij dx^i dx^j

with ``h`` independent of ``v``.  As a matrix this means ``g_uv = 1``,
``g_vv = g_vx = 0``, ``g_uu = H`` and ``g_{u x_i} = W_i / 2`` (the quadratic
form counts the cross term twice).

Predicates, each implying the next one down:

=============== ==========================================================
CahenWallach    PlaneWave, ``S`` constant in ``u`` and ``det S != 0``
PlaneWave       PpWave, ``H = x^T S(u) x`` with ``S`` not identically zero
PpWave          Brinkmann, ``W = 0`` and ``h`` the identity matrix
Brinkmann       WeaklyBrinkmann and ``d_v H = 0``
WeaklyBrinkmann ``d_v W_i = 0``
KundtForm       adapted form
=============== ==========================================================

``Siklos`` sits on a side branch: ``(x_n)^2 g`` is a pp-wave.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .congruence import analyze
from .errors import FrameDegenerate, NotAdapted, NotTotallyGeodesic, PostVerificationFailed, SingularMetric
from .expr import to_tree
from .expr.ratfunc import ONE as RF_ONE
from .expr.ratfunc import ZERO as RF_ZERO
from .expr.ratfunc import derivative, make_func
from .expr.ratfunc import substitute_rf
from .geometry import HALF, Chart, Metric, VectorField, _cofactors, _det, rf

CLASSES = ("KundtForm", "WeaklyBrinkmann", "Brinkmann", "PpWave", "PlaneWave", "CahenWallach", "Siklos")
_LADDER = ("CahenWallach", "PlaneWave", "PpWave", "Brinkmann", "WeaklyBrinkmann", "KundtForm")


@dataclass(frozen=True)
class Roles:
    u: str
    v: str
    transverse: tuple = ()

    def check(self, chart: Chart):
        names = (self.u, self.v) + tuple(self.transverse)
        if len(set(names)) != len(names) or set(names) != set(chart.coords):
            raise NotAdapted([f"roles {names} must name every chart coordinate exactly once"])


@dataclass
class AdaptedKundtForm:
    g: Metric
    roles: Roles
    H: object
    W: list
    h: list  # canonical forms

    def trees(self):
        return {"H": to_tree(self.H), "W": [to_tree(w) for w in self.W],
                "h": [[to_tree(x) for x in row] for row in self.h]}


def adapted_metric(chart: Chart, roles: Roles, H=0, W=None, h=None, check=True) -> Metric:
    """Assemble the adapted-form metric from ``(H, W, h)``."""
    n = len(roles.transverse)
    W = list(W) if W is not None else [0] * n
    h = h if h is not None else [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    ent = {(roles.u, roles.v): 1, (roles.u, roles.u): H}
    for i, xi in enumerate(roles.transverse):
        ent[(roles.u, xi)] = rf(W[i]) * HALF
        for j, xj in enumerate(roles.transverse):
            ent[(xi, xj)] = h[i][j]
    return Metric.from_entries(chart, ent, check)


def detect_kundt_form(g: Metric, roles: Roles) -> AdaptedKundtForm:
    """Read ``(H, W, h)`` off a metric in adapted form, or raise ``NotAdapted``."""
    chart = g.chart
    roles.check(chart)
    ix = chart.index
    m = g.rf
    u, v, xs = ix[roles.u], ix[roles.v], [ix[x] for x in roles.transverse]
    reasons = []
    if not chart.zero(m[v][v]):
        reasons.append("g(v,v) != 0")
    if not chart.zero(m[u][v] - RF_ONE):
        reasons.append("g(u,v) != 1")
    for i, a in enumerate(xs):
        if not chart.zero(m[v][a]):
            reasons.append(f"g(v,{roles.transverse[i]}) != 0")
    h = [[m[a][b] for b in xs] for a in xs]
    for i in range(len(xs)):
        for j in range(i, len(xs)):
            if not chart.zero(derivative(h[i][j], roles.v)):
                reasons.append(f"d_v h({roles.transverse[i]},{roles.transverse[j]}) != 0")
    if xs and not reasons:
        vals = chart.eval_at([x for row in h for x in row]).reshape(len(xs), len(xs))
        if np.min(np.linalg.eigvalsh(vals)) <= 0:
            reasons.append("transverse block is not positive definite at the base point")
    if reasons:
        raise NotAdapted(reasons)
    W = [m[u][a] + m[u][a] for a in xs]
    return AdaptedKundtForm(g, roles, m[u][u], W, h)


@dataclass
class ClassificationReport:
    predicates: dict
    most_specific: str | None
    payload: dict = field(default_factory=dict)
    leaf_flat: bool | None = None
    notes: list = field(default_factory=list)

    def as_dict(self):
        pay = {}
        for k, val in self.payload.items():
            if isinstance(val, list):
                pay[k] = [[str(x) for x in row] if isinstance(row, list) else str(row) for row in val]
            else:
                pay[k] = str(val)
        return {"predicates": dict(self.predicates), "class": self.most_specific,
                "payload": pay, "leaf_flat": self.leaf_flat, "notes": list(self.notes)}


def plane_wave_profile(f: AdaptedKundtForm):
    """``S_ij = 1/2 d_i d_j H`` as canonical forms."""
    xs = f.roles.transverse
    return [[HALF * derivative(derivative(f.H, a), b) for b in xs] for a in xs]


def classify(f: AdaptedKundtForm) -> ClassificationReport:
    """Predicate vector and most specific class for an adapted form."""
    chart = f.g.chart
    z = chart.zero
    roles = f.roles
    xs = roles.transverse
    n = len(xs)
    pred = {c: False for c in CLASSES}
    notes = []
    payload = {}
    pred["KundtForm"] = True
    pred["WeaklyBrinkmann"] = all(z(derivative(w, roles.v)) for w in f.W)
    pred["Brinkmann"] = pred["WeaklyBrinkmann"] and z(derivative(f.H, roles.v))
    identity = all(f.h[i][j] == (RF_ONE if i == j else RF_ZERO) for i in range(n) for j in range(n))
    pred["PpWave"] = pred["Brinkmann"] and all(z(w) for w in f.W) and identity
    if pred["Brinkmann"] and not identity and all(z(w) for w in f.W):
        notes.append("transverse metric is not presented as the identity")
    if pred["PpWave"]:
        cubic_free = all(z(derivative(derivative(derivative(f.H, a), b), c))
                         for ai, a in enumerate(xs) for bi, b in enumerate(xs[ai:], ai)
                         for c in xs[bi:])
        origin = {x: RF_ZERO for x in xs}
        h0 = substitute_rf(f.H, origin)
        grad0 = [substitute_rf(derivative(f.H, a), origin) for a in xs]
        affine_free = z(h0) and all(z(q) for q in grad0)
        S = plane_wave_profile(f)
        S_zero = all(z(S[i][j]) for i in range(n) for j in range(i, n))
        if cubic_free and not affine_free:
            notes.append("affine part removable by coordinate change (not performed)")
        if cubic_free and affine_free and S_zero:
            notes.append("H vanishes identically: flat pp-wave, not reported as a plane wave")
        pred["PlaneWave"] = cubic_free and affine_free and not S_zero and n > 0
        if pred["PlaneWave"]:
            payload["S"] = [[to_tree(x) for x in row] for row in S]
            u_const = all(z(derivative(S[i][j], roles.u)) for i in range(n) for j in range(n))
            pred["CahenWallach"] = u_const and not z(_det(S))
    most = next((c for c in _LADDER if pred[c]), None)
    if pred["PpWave"]:
        payload["H"] = to_tree(f.H)
    return ClassificationReport(pred, most, payload, None, notes)


@dataclass
class SiklosResult:
    siklos: bool
    H: object = None
    factor: object = None
    reasons: list = field(default_factory=list)

    def __bool__(self):
        return self.siklos


def detect_siklos(g: Metric, roles: Roles) -> SiklosResult:
    """Whether ``(x_n)^2 g`` is a pp-wave in adapted form, ``x_n`` the last transverse role."""
    roles.check(g.chart)
    if not roles.transverse:
        return SiklosResult(False, reasons=["no transverse coordinate"])
    xn = roles.transverse[-1]
    con = g.chart.constraints.get(xn)
    notes = [] if con and con[0] == "positive" else [f"{xn} is not constrained positive"]
    sq = rf(g.chart.sym(xn)).pow(2)
    scaled = Metric(g.chart, [[sq * x for x in row] for row in g.rf], check=False)
    try:
        f = detect_kundt_form(scaled, roles)
    except NotAdapted as e:
        return SiklosResult(False, reasons=notes + list(e.reasons))
    rep = classify(f)
    if not rep.predicates["PpWave"]:
        return SiklosResult(False, reasons=notes + ["rescaled metric is not a pp-wave"])
    return SiklosResult(True, to_tree(f.H), to_tree(rf(g.chart.sym(xn)).pow(-2)), notes)


def leaf_curvature(g: Metric, roles: Roles, f: AdaptedKundtForm | None = None):
    """Curvature of the connection induced on the leaves ``u = const``.

    Returns ``R[l][k][i][j]`` over the leaf coordinates ``(v, x_1..x_n)``
    (canonical forms, ``u`` frozen).  Raises ``NotTotallyGeodesic`` when the
    ambient connection leaks a ``d_u`` component along the leaves.
    """
    chart = g.chart
    roles.check(chart)
    ix = chart.index
    leaf = [roles.v] + list(roles.transverse)
    L = [ix[c] for c in leaf]
    gam = g.gamma_rf()
    u = ix[roles.u]
    for a in L:
        for b in L:
            if not chart.zero(gam[u][a][b]):
                raise NotTotallyGeodesic(f"Gamma^{roles.u}_({chart.coords[a]} {chart.coords[b]}) != 0")
    m = len(L)
    G = [[[gam[L[k]][L[i]][L[j]] for j in range(m)] for i in range(m)] for k in range(m)]
    R = [[[[RF_ZERO] * m for _ in range(m)] for _ in range(m)] for _ in range(m)]
    for l in range(m):
        for k in range(m):
            for i in range(m):
                for j in range(m):
                    if i == j:
                        continue
                    acc = derivative(G[l][j][k], leaf[i]) - derivative(G[l][i][k], leaf[j])
                    for q in range(m):
                        if not G[l][i][q].is_zero and not G[q][j][k].is_zero:
                            acc = acc + G[l][i][q] * G[q][j][k]
                        if not G[l][j][q].is_zero and not G[q][i][k].is_zero:
                            acc = acc - G[l][j][q] * G[q][i][k]
                    R[l][k][i][j] = acc
    return R


def leaf_is_flat(g: Metric, roles: Roles) -> bool:
    R = leaf_curvature(g, roles)
    m = len(R)
    return all(g.chart.zero(R[l][k][i][j])
               for l in range(m) for k in range(m) for i in range(m) for j in range(i + 1, m))


def leaf_curvature_at_base(g: Metric, roles: Roles):
    """Largest absolute leaf curvature component at the base point."""
    R = leaf_curvature(g, roles)
    flat = [x for a in R for b in a for c in b for x in c if not x.is_zero]
    if not flat:
        return 0.0
    return float(np.max(np.abs(g.chart.eval_at(flat))))


def conformal_rescale(g: Metric, sigma) -> Metric:
    """``exp(sigma) g``; adds a note to ``metric.notes`` when ``sigma`` depends on ``v``.

    The ``v`` test uses a coordinate literally named ``v`` if present.
    """
    s = rf(sigma)
    factor = make_func("exp", s)
    out = Metric(g.chart, [[factor * x for x in row] for row in g.rf])
    out.notes = list(getattr(g, "notes", []))
    if "v" in g.chart.coords and not g.chart.zero(derivative(s, "v")):
        out.notes.append("conformal factor depends on v: the result need not be Kundt")
    return out


def full_classification(g: Metric, roles: Roles) -> ClassificationReport:
    """Adapted-form detection, classification, Siklos test and leaf flatness."""
    try:
        f = detect_kundt_form(g, roles)
    except NotAdapted as e:
        rep = ClassificationReport({c: False for c in CLASSES}, None, {}, None,
                                   ["not in adapted form: " + "; ".join(e.reasons)])
        f = None
    else:
        rep = classify(f)
    if roles.transverse and f is None:
        sk = detect_siklos(g, roles)
        if sk:
            rep.predicates["Siklos"] = True
            rep.predicates["KundtForm"] = True
            rep.most_specific = "Siklos"
            rep.payload = {"H": sk.H, "conformal_factor": sk.factor}
            rep.notes = ["Kundt through the conformal factor; not itself in adapted form"] + sk.reasons
    try:
        rep.leaf_flat = leaf_is_flat(g, roles)
    except (NotTotallyGeodesic, NotAdapted) as e:
        rep.notes.append(f"leaf curvature unavailable: {e}")
    return rep


def build_kundt_metric(V: VectorField, E, Z: VectorField, h, verify=True) -> Metric:
    """Metric with ``g = h`` on ``span(V, E)``, ``g(E, Z) = 0``, ``g(V, Z) = 1``, ``g(Z, Z) = 0``.

    ``h`` is a ``(d-1) x (d-1)`` matrix on the basis ``(V, E_1, ...)`` whose
    first row and column vanish.  The chart metric is ``P^-T G P^-1`` where
    ``P`` has the frame fields as columns.  Raises ``FrameDegenerate`` when the
    frame or ``h`` fails the preconditions and ``PostVerificationFailed`` when
    the result does not make ``V^perp`` a totally geodesic foliation.
    """
    chart = V.chart
    d = chart.dim
    E = list(E)
    if len(E) != d - 2:
        raise FrameDegenerate(f"expected {d - 2} screen fields, got {len(E)}")
    frame = [V] + E + [Z]
    n = d - 1
    hh = [[rf(x) for x in row] for row in h]
    if len(hh) != n or any(len(r) != n for r in hh):
        raise FrameDegenerate(f"h must be {n}x{n}")
    for i in range(n):
        for j in range(i + 1, n):
            if hh[i][j] != hh[j][i]:
                raise FrameDegenerate("h is not symmetric")
    if not all(chart.zero(hh[0][j]) for j in range(n)):
        raise FrameDegenerate("V is not in the radical of h")
    if n > 1:
        hE = chart.eval_at([hh[i][j] for i in range(1, n) for j in range(1, n)]).reshape(n - 1, n - 1)
        if np.min(np.linalg.eigvalsh(hE)) <= 1e-12:
            raise FrameDegenerate("h is not positive definite on the screen: its radical is larger than RV")
    P = [[frame[c].rf[r] for c in range(d)] for r in range(d)]
    detP = _det(P)
    if abs(chart.eval_at([detP])[0]) < 1e-12:
        raise FrameDegenerate("frame fields are linearly dependent at the base point")
    cof = _cofactors(P)
    inv_det = RF_ONE / detP
    Pinv = [[cof[j][i] * inv_det for j in range(d)] for i in range(d)]
    G = [[RF_ZERO] * d for _ in range(d)]
    for i in range(n):
        for j in range(n):
            G[i][j] = hh[i][j]
    G[0][d - 1] = G[d - 1][0] = RF_ONE
    # g_rs = sum_ab Pinv[a][r] G[a][b] Pinv[b][s]
    M = [[RF_ZERO] * d for _ in range(d)]
    for r in range(d):
        for s in range(r, d):
            acc = RF_ZERO
            for a in range(d):
                if Pinv[a][r].is_zero:
                    continue
                for b in range(d):
                    if not G[a][b].is_zero and not Pinv[b][s].is_zero:
                        acc = acc + Pinv[a][r] * G[a][b] * Pinv[b][s]
            M[r][s] = M[s][r] = acc
    try:
        g = Metric(chart, M)
    except SingularMetric as e:
        raise FrameDegenerate(str(e)) from e
    if verify:
        rep = analyze(g, V)
        if not rep.locally_kundt:
            raise PostVerificationFailed("assembled metric is not locally Kundt for V: the flow condition fails")
    return g
