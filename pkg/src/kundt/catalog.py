"""Named example metrics and Lie algebras with their expected outcomes.

``get(name, **params)`` builds an entry; ``run_all(seed)`` re-derives every
expectation through the live pipeline and returns one row per entry.
"""

from __future__ import annotations

import inspect
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .congruence import analyze
from .errors import BadParameter, ExprSyntaxError, KundtError, UnknownEntry
from .expr.ratfunc import ZERO as RF_ZERO
from .geometry import Chart, Metric, VectorField, rf
from .hierarchy import (Roles, adapted_metric, build_kundt_metric, conformal_rescale,
                        full_classification, leaf_curvature_at_base)
from .liealg import analyze_algebraic, check_jacobi, heis3, oscillator, r_ltimes_heis, sl2_det
from .metricfile import AlgebraSpec, dump_document

ALL_TRUE = {k: True for k in ("lightlike", "geodesic", "twist_free", "shear_free", "divergence_free",
                              "tg_item2", "tg_item4", "locally_kundt", "kundt")}


@dataclass
class CatalogInstance:
    name: str
    params: dict
    chart: Chart | None = None
    metric: Metric | None = None
    V: VectorField | None = None
    roles: Roles | None = None
    algebra: AlgebraSpec | None = None
    expected: dict = field(default_factory=dict)
    expected_class: str | None = None
    checks: dict = field(default_factory=dict)  # extra payload expectations

    @property
    def kind(self):
        return "algebra" if self.algebra is not None else "chart"

    def to_text(self):
        comments = [f"catalog entry {self.name}"]
        comments += [f"param {k} = {_param_str(v)}" for k, v in self.params.items()]
        if self.kind == "chart":
            comments.append(f"expected class: {self.expected_class}")
            return dump_document(self.chart, self.metric, {"V": self.V}, self.roles, comments=comments)
        return dump_document(algebra=self.algebra, comments=comments)


def _param_str(v):
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_param_str(x) for x in v) + "]"
    return str(v)


# --- builders ---------------------------------------------------------------

def _transverse(n):
    return tuple(f"x{i + 1}" for i in range(n))


def _dim(d, lo=2):
    try:
        d = int(d)
    except (TypeError, ValueError):
        raise BadParameter(f"dim must be an integer, got {d!r}") from None
    if not lo <= d <= 6:
        raise BadParameter(f"dim must be between {lo} and 6")
    return d


def _expr(chart, text, what):
    try:
        return chart.parse(str(text))
    except ExprSyntaxError as e:
        raise BadParameter(f"{what}: {e}") from None


def _matrix(chart, S, n, what):
    if len(S) != n or any(len(r) != n for r in S):
        raise BadParameter(f"{what} must be {n}x{n}")
    return [[_expr(chart, x, what) for x in row] for row in S]


def _brinkmann_chart(n, constraints=None, base=None):
    coords = ("u", "v") + _transverse(n)
    return Chart(coords, constraints, base), Roles("u", "v", _transverse(n))


def build_minkowski(dim=4):
    d = _dim(dim)
    chart, roles = _brinkmann_chart(d - 2)
    g = adapted_metric(chart, roles)
    return CatalogInstance("minkowski", {"dim": d}, chart, g, VectorField.coordinate(chart, "v"), roles,
                           expected=dict(ALL_TRUE), expected_class="PpWave", checks={"H": "0"})


def build_pp_wave(H="x1^3 + u*x1*x2"):
    chart, roles = _brinkmann_chart(2)
    Hx = _expr(chart, H, "H")
    g = adapted_metric(chart, roles, Hx)
    return CatalogInstance("pp_wave", {"H": H}, chart, g, VectorField.coordinate(chart, "v"), roles,
                           expected=dict(ALL_TRUE), expected_class="PpWave", checks={"H": H, "leaf_flat": True})


def _quadratic(chart, S, xs):
    H = RF_ZERO
    for i, a in enumerate(xs):
        for j, b in enumerate(xs):
            H = H + rf(S[i][j]) * rf(chart.sym(a)) * rf(chart.sym(b))
    return H


def build_plane_wave(S=(("1 + u^2", "u"), ("u", "-1"))):
    chart, roles = _brinkmann_chart(2)
    Sx = _matrix(chart, S, 2, "S")
    g = adapted_metric(chart, roles, _quadratic(chart, Sx, roles.transverse))
    return CatalogInstance("plane_wave", {"S": [list(r) for r in S]}, chart, g,
                           VectorField.coordinate(chart, "v"), roles, expected=dict(ALL_TRUE),
                           expected_class="PlaneWave", checks={"S": [list(r) for r in S], "leaf_flat": True})


def build_cahen_wallach(S=((1, 0), (0, 1))):
    chart, roles = _brinkmann_chart(len(S))
    try:
        Sq = [[Fraction(x) for x in row] for row in S]
    except (TypeError, ValueError):
        raise BadParameter("S must be a rational matrix") from None
    Sx = _matrix(chart, [[str(x) for x in row] for row in Sq], len(S), "S")
    g = adapted_metric(chart, roles, _quadratic(chart, Sx, roles.transverse))
    return CatalogInstance("cahen_wallach", {"S": [[str(x) for x in r] for r in Sq]}, chart, g,
                           VectorField.coordinate(chart, "v"), roles, expected=dict(ALL_TRUE),
                           expected_class="CahenWallach",
                           checks={"S": [[str(x) for x in r] for r in Sq], "leaf_flat": True})


def _siklos_metric(chart, roles, H):
    xn = roles.transverse[-1]
    f = rf(chart.sym(xn)).pow(-2)
    base = adapted_metric(chart, roles, H, check=False)
    return Metric(chart, [[f * x for x in row] for row in base.rf])


def build_siklos(H="x1"):
    chart, roles = _brinkmann_chart(2, {"x2": ("positive",)})
    Hx = _expr(chart, H, "H")
    g = _siklos_metric(chart, roles, Hx)
    return CatalogInstance("siklos", {"H": H}, chart, g, VectorField.coordinate(chart, "v"), roles,
                           expected=dict(ALL_TRUE), expected_class="Siklos",
                           checks={"H": H, "leaf_curved": True})


def build_ads_poincare(dim=4):
    d = _dim(dim, 3)
    ys = tuple(f"y{i + 1}" for i in range(d - 2))
    chart = Chart(("u", "v") + ys, {ys[-1]: ("positive",)})
    roles = Roles("u", "v", ys)
    g = _siklos_metric(chart, roles, 0)
    return CatalogInstance("ads_poincare", {"dim": d}, chart, g, VectorField.coordinate(chart, "v"), roles,
                           expected=dict(ALL_TRUE), expected_class="Siklos",
                           checks={"H": "0", "leaf_curved": True, "curvature": -1})


def build_kundt_generic(H="u*v^2 + x1", W=("v*x1", "u"), h=(("1 + u^2", "u*x1/4"), ("u*x1/4", "1"))):
    chart, roles = _brinkmann_chart(2)
    Hx = _expr(chart, H, "H")
    if len(W) != 2:
        raise BadParameter("W needs 2 entries")
    Wx = [_expr(chart, w, "W") for w in W]
    hx = _matrix(chart, h, 2, "h")
    g = adapted_metric(chart, roles, Hx, Wx, hx)
    return CatalogInstance("kundt_generic", {"H": H, "W": list(W), "h": [list(r) for r in h]}, chart, g,
                           VectorField.coordinate(chart, "v"), roles, expected=dict(ALL_TRUE),
                           expected_class="KundtForm")


def build_suspension_local(lam=2):
    try:
        lam = Fraction(lam)
    except (TypeError, ValueError):
        raise BadParameter("lam must be rational") from None
    if lam <= 0 or lam == 1:
        raise BadParameter("lam must be positive and different from 1")
    chart = Chart(("x", "y", "t"))
    V = VectorField(chart, [chart.parse(f"exp(t*log({lam}))"), 0, 0])
    E = VectorField.coordinate(chart, "t")
    Z = VectorField.coordinate(chart, "y")
    g = build_kundt_metric(V, [E], Z, [[0, 0], [0, 1]])
    return CatalogInstance("suspension_local", {"lam": str(lam)}, chart, g, V, None,
                           expected=dict(ALL_TRUE), expected_class=None)


def build_conformal(base="pp_wave", sigma="u + x1/2"):
    if base not in ("minkowski", "pp_wave", "plane_wave", "cahen_wallach", "kundt_generic"):
        raise BadParameter(f"conformal base must be an adapted-form entry, got {base!r}")
    inner = get(base)
    s = _expr(inner.chart, sigma, "sigma")
    g = conformal_rescale(inner.metric, s)
    expected = dict(inner.expected)
    return CatalogInstance("conformal", {"base": base, "sigma": sigma}, inner.chart, g, inner.V, inner.roles,
                           expected=expected, expected_class=None)


def build_twisting_minkowski():
    chart = Chart(("t", "x", "y", "z"))
    g = Metric.from_entries(chart, {("t", "t"): -1, ("x", "x"): 1, ("y", "y"): 1, ("z", "z"): 1})
    V = VectorField(chart, [1, chart.parse("cos(z)"), chart.parse("sin(z)"), 0])
    expected = {"lightlike": True, "geodesic": True, "twist_free": False, "shear_free": False,
                "divergence_free": True, "tg_item2": None, "tg_item4": False,
                "locally_kundt": False, "kundt": False}
    return CatalogInstance("twisting_minkowski", {}, chart, g, V, None, expected=expected, expected_class=None)


_ALG_EXPECT = {"lightlike": True, "subalgebra": True, "normality": True, "algebraic_kundt": True}


def _algebra_entry(fx, params, extra=None):
    exp = dict(_ALG_EXPECT)
    exp.update(extra or {})
    return CatalogInstance(fx.name, params, algebra=AlgebraSpec(fx.L, fx.m, fx.V), expected=exp)


def build_heis3():
    return _algebra_entry(heis3(), {})


def build_oscillator():
    return _algebra_entry(oscillator(), {}, {"geodesic": True})


def build_r_ltimes_heis(A=((1, 0, 0), (0, 0, 0), (0, 0, 1))):
    fx = r_ltimes_heis(A)
    return _algebra_entry(fx, {"A": [[str(Fraction(x)) for x in r] for r in A]},
                          {"nabla_v_zero_identity_certified": True, "brinkmann_type": True})


def build_sl2_det():
    return _algebra_entry(sl2_det(), {})


ROSTER = {
    "minkowski": build_minkowski,
    "pp_wave": build_pp_wave,
    "plane_wave": build_plane_wave,
    "cahen_wallach": build_cahen_wallach,
    "siklos": build_siklos,
    "ads_poincare": build_ads_poincare,
    "kundt_generic": build_kundt_generic,
    "suspension_local": build_suspension_local,
    "conformal": build_conformal,
    "twisting_minkowski": build_twisting_minkowski,
    "heis3": build_heis3,
    "oscillator": build_oscillator,
    "r_ltimes_heis": build_r_ltimes_heis,
    "sl2_det": build_sl2_det,
}


def names():
    return list(ROSTER)


def get(name, **params) -> CatalogInstance:
    """Build a catalog entry; unknown names raise ``UnknownEntry``, bad params ``BadParameter``."""
    if name not in ROSTER:
        raise UnknownEntry(f"no catalog entry named {name!r}")
    builder = ROSTER[name]
    allowed = set(inspect.signature(builder).parameters)
    bad = set(params) - allowed
    if bad:
        raise BadParameter(f"{name} takes no parameter(s) {sorted(bad)}; allowed: {sorted(allowed)}")
    return builder(**params)


# --- self test ------------------------------------------------------------------

@dataclass
class Row:
    name: str
    passed: bool
    details: list
    observed: dict
    seconds: float

    def as_dict(self):
        return {"name": self.name, "passed": self.passed, "details": list(self.details),
                "observed": self.observed}


def _check_chart_entry(inst: CatalogInstance, seed):
    details = []
    chart = inst.chart.with_options(seed=seed)
    g = Metric(chart, inst.metric.rf, check=False)
    V = VectorField(chart, inst.V.rf)
    rep = analyze(g, V)
    observed = {"report": rep.booleans()}
    for k, want in inst.expected.items():
        got = getattr(rep, k)
        if got != want:
            details.append(f"{k}: expected {want}, got {got}")
    if inst.roles is not None:
        cls = full_classification(g, inst.roles)
        observed["class"] = cls.most_specific
        observed["leaf_flat"] = cls.leaf_flat
        if cls.most_specific != inst.expected_class:
            details.append(f"class: expected {inst.expected_class}, got {cls.most_specific}")
        ck = inst.checks
        if "H" in ck:
            H = cls.payload.get("H")
            if H is None or not chart.zero(rf(H) - rf(chart.parse(str(ck["H"])))):
                details.append(f"H payload {H} does not match {ck['H']}")
        if "S" in ck:
            S = cls.payload.get("S")
            want = ck["S"]
            if S is None or not all(chart.zero(rf(S[i][j]) - rf(chart.parse(str(want[i][j]))))
                                    for i in range(len(want)) for j in range(len(want))):
                details.append(f"S payload {S} does not match {want}")
        if ck.get("leaf_flat") and cls.leaf_flat is not True:
            details.append("leaves are not flat")
        if ck.get("leaf_curved"):
            val = leaf_curvature_at_base(g, inst.roles)
            observed["leaf_curvature_at_base"] = round(val, 12)
            if not val > 1e-9:
                details.append("leaf curvature vanishes at the base point")
    elif inst.expected_class is not None:
        details.append("expected a class but the entry has no roles")
    return details, observed


def _check_algebra_entry(inst: CatalogInstance):
    a = inst.algebra
    details = []
    if not check_jacobi(a.L):
        details.append("Jacobi identity fails")
    rep = analyze_algebraic(a.L, a.m, a.V).as_dict()
    for k, want in inst.expected.items():
        if rep.get(k) != want:
            details.append(f"{k}: expected {want}, got {rep.get(k)}")
    return details, {"report": rep}


def run_entry(inst: CatalogInstance, seed=0) -> Row:
    t0 = time.perf_counter()
    try:
        if inst.kind == "algebra":
            details, observed = _check_algebra_entry(inst)
        else:
            details, observed = _check_chart_entry(inst, seed)
    except KundtError as e:
        details, observed = [f"{type(e).__name__}: {e}"], {}
    return Row(inst.name, not details, details, observed, time.perf_counter() - t0)


def run_all(seed=0, entries=None):
    """Analyze every entry (or the given instances) and compare with expectations."""
    if entries is None:
        entries = [get(n) for n in ROSTER]
    return [run_entry(inst, seed) for inst in entries]
