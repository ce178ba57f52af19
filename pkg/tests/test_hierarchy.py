import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import adapted_chart, poly_text, random_adapted
from kundt import catalog
from kundt.congruence import analyze
from kundt.errors import FrameDegenerate, NotAdapted, NotTotallyGeodesic, PostVerificationFailed
from kundt.geometry import Chart, Metric, VectorField, covariant_derivative, rf
from kundt.hierarchy import (CLASSES, Roles, adapted_metric, build_kundt_metric, classify, conformal_rescale,
                             detect_kundt_form, detect_siklos, full_classification, leaf_curvature,
                             leaf_is_flat, plane_wave_profile)

IMPLIES = [("CahenWallach", "PlaneWave"), ("PlaneWave", "PpWave"), ("PpWave", "Brinkmann"),
           ("Brinkmann", "WeaklyBrinkmann"), ("WeaklyBrinkmann", "KundtForm"), ("Siklos", "KundtForm")]


def pp(H, n=2, constraints=None):
    chart, roles = adapted_chart(n)
    if constraints:
        chart = Chart(chart.coords, constraints)
    return adapted_metric(chart, roles, chart.parse(H)), roles


def _class_of(H, n=2):
    g, roles = pp(H, n)
    return classify(detect_kundt_form(g, roles))


# --- detection ---------------------------------------------------------------------------

def test_detect_minkowski():
    g, roles = pp("0")
    f = detect_kundt_form(g, roles)
    assert f.H.is_zero and all(w.is_zero for w in f.W)
    assert f.h == [[rf(1), rf(0)], [rf(0), rf(1)]]


def test_detect_accepts_v_dependent_H():
    chart, roles = adapted_chart(1)
    g = adapted_metric(chart, roles, chart.parse("u*v"), [chart.parse("x1")])
    f = detect_kundt_form(g, roles)
    assert f.H == rf(chart.parse("u*v"))
    assert f.W == [rf(chart.parse("x1"))]


def test_detect_rejects_v_dependent_h():
    chart = Chart(("u", "v", "x1"), base={"v": 1})
    g = Metric.from_entries(chart, {("u", "v"): 1, ("x1", "x1"): chart.parse("v")})
    with pytest.raises(NotAdapted) as info:
        detect_kundt_form(g, Roles("u", "v", ("x1",)))
    assert any("d_v h" in r for r in info.value.reasons)


def test_detect_rejects_nonconstant_guv():
    chart = Chart(("u", "v", "x1"))
    g = Metric.from_entries(chart, {("u", "v"): chart.parse("1 + x1^2"), ("x1", "x1"): 1})
    with pytest.raises(NotAdapted):
        detect_kundt_form(g, Roles("u", "v", ("x1",)))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31), st.sampled_from([1, 2]))
def test_assemble_detect_round_trip(seed, n):
    g, roles, _ = random_adapted(np.random.default_rng(seed), n)
    f = detect_kundt_form(g, roles)
    g2 = adapted_metric(g.chart, roles, f.H, f.W, f.h)
    assert all(g.chart.zero(a - b) for ra, rb in zip(g.rf, g2.rf) for a, b in zip(ra, rb))


# --- classification ---------------------------------------------------------------------------

def test_cahen_wallach_example():
    rep = _class_of("x1^2 + x2^2")
    assert rep.most_specific == "CahenWallach"
    assert [[rf(x) for x in row] for row in rep.payload["S"]] == [[rf(1), rf(0)], [rf(0), rf(1)]]


def test_degenerate_plane_wave():
    rep = _class_of("u*x1^2")
    assert rep.most_specific == "PlaneWave" and not rep.predicates["CahenWallach"]
    S = [[rf(x) for x in row] for row in rep.payload["S"]]
    chart, _ = adapted_chart(2)
    assert S == [[rf(chart.parse("u")), rf(0)], [rf(0), rf(0)]]


def test_cubic_profile_is_pp_wave_only():
    rep = _class_of("x1^3")
    assert rep.most_specific == "PpWave" and not rep.predicates["PlaneWave"]


def test_affine_part_and_flat_notes():
    rep = _class_of("x1 + x1^2")
    assert rep.most_specific == "PpWave"
    assert any("affine" in n for n in rep.notes)
    rep0 = _class_of("0")
    assert rep0.most_specific == "PpWave"
    assert any("vanishes identically" in n for n in rep0.notes)


def test_weakly_brinkmann_and_generic():
    chart, roles = adapted_chart(1)
    g = adapted_metric(chart, roles, chart.parse("v^2*x1"), [chart.parse("u")])
    assert classify(detect_kundt_form(g, roles)).most_specific == "WeaklyBrinkmann"
    assert full_classification(catalog.get("kundt_generic").metric, catalog.get("kundt_generic").roles
                               ).most_specific == "KundtForm"


def test_plane_wave_profile_reproduces_H():
    inst = catalog.get("plane_wave")
    f = detect_kundt_form(inst.metric, inst.roles)
    S = plane_wave_profile(f)
    xs = [rf(inst.chart.parse(x)) for x in inst.roles.transverse]
    quad = sum((xs[i] * S[i][j] * xs[j] for i in range(2) for j in range(2)), rf(0))
    assert inst.chart.zero(f.H - quad)


def _monotone(pred):
    return all(not pred[a] or pred[b] for a, b in IMPLIES)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31), st.sampled_from(["generic", "brinkmann", "quadratic", "weak"]))
def test_hierarchy_monotonicity(seed, kind):
    rng = np.random.default_rng(seed)
    if kind == "quadratic":
        chart, roles = adapted_chart(2)
        S = [[poly_text(rng, ["u"], 1, 1) for _ in range(2)] for _ in range(2)]
        H = f"({S[0][0]})*x1^2 + ({S[0][1]})*x1*x2 + ({S[1][1]})*x2^2"
        g = adapted_metric(chart, roles, chart.parse(H))
    elif kind == "weak":
        chart, roles = adapted_chart(1)
        g = adapted_metric(chart, roles, chart.parse(poly_text(rng, ["u", "v", "x1"], 3, 3)),
                           [chart.parse(poly_text(rng, ["u", "x1"], 2, 2))])
    else:
        g, roles, _ = random_adapted(rng, 2, brinkmann=kind == "brinkmann")
    rep = full_classification(g, roles)
    assert set(rep.predicates) == set(CLASSES)
    assert _monotone(rep.predicates)
    assert rep.predicates[rep.most_specific]


@pytest.mark.parametrize("name", ["minkowski", "pp_wave", "plane_wave", "cahen_wallach", "siklos",
                                  "ads_poincare", "kundt_generic"])
def test_catalog_monotonicity(name):
    inst = catalog.get(name)
    assert _monotone(full_classification(inst.metric, inst.roles).predicates)


# --- parallel fields -------------------------------------------------------------------------------

@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_brinkmann_dv_is_parallel(seed):
    g, roles, V = random_adapted(np.random.default_rng(seed), 2, brinkmann=True)
    assert classify(detect_kundt_form(g, roles)).predicates["Brinkmann"]
    for c in g.chart.coords:
        assert all(g.chart.zero(x) for x in covariant_derivative(g, VectorField.coordinate(g.chart, c), V).rf)


def test_weakly_brinkmann_dv_is_a_parallel_line():
    chart, roles = adapted_chart(1)
    g = adapted_metric(chart, roles, chart.parse("v^2 + u*x1"), [chart.parse("x1*u")])
    rep = classify(detect_kundt_form(g, roles))
    assert rep.predicates["WeaklyBrinkmann"] and not rep.predicates["Brinkmann"]
    V = VectorField.coordinate(chart, "v")
    for c in chart.coords:
        n = covariant_derivative(g, VectorField.coordinate(chart, c), V)
        assert all(chart.zero(x) for i, x in enumerate(n.rf) if i != 1)
        if c == "u":
            assert not chart.zero(n.rf[1])


# --- Siklos and leaves ----------------------------------------------------------------------------------

def test_siklos_detection():
    ads = catalog.get("ads_poincare")
    res = detect_siklos(ads.metric, ads.roles)
    assert res and rf(res.H).is_zero
    sk = catalog.get("siklos")
    res = detect_siklos(sk.metric, sk.roles)
    assert res and rf(res.H) == rf(sk.chart.parse("x1"))
    mink = catalog.get("minkowski")
    assert not detect_siklos(mink.metric, mink.roles)


def test_hyperbolization_of_pp_wave():
    g, roles = pp("x1^3 + u*x2", constraints={"x2": ("positive",)})
    h = conformal_rescale(g, g.chart.parse("-2*log(x2)"))
    rep = full_classification(h, roles)
    assert rep.most_specific == "Siklos"
    assert rf(rep.payload["H"]) == rf(g.chart.parse("x1^3 + u*x2"))
    assert rep.predicates["KundtForm"] and _monotone(rep.predicates)


def test_conformal_rescale_basics():
    g, roles = pp("x1^2")
    same = conformal_rescale(g, g.chart.parse("0"))
    assert same.rf == g.rf
    kg = catalog.get("kundt_generic")
    assert analyze(conformal_rescale(kg.metric, kg.chart.parse("u")), kg.V).kundt
    noted = conformal_rescale(g, g.chart.parse("v"))
    assert any("depends on v" in n for n in noted.notes)


def test_pp_wave_leaves_are_flat():
    for name in ("pp_wave", "plane_wave", "cahen_wallach", "minkowski"):
        inst = catalog.get(name)
        assert leaf_is_flat(inst.metric, inst.roles)


def test_siklos_leaves_are_curved():
    inst = catalog.get("siklos")
    R = leaf_curvature(inst.metric, inst.roles)
    assert any(not inst.chart.zero(x) for a in R for b in a for c in b for x in c)
    assert not leaf_is_flat(inst.metric, inst.roles)


def test_leaf_curvature_needs_totally_geodesic_leaves():
    chart = Chart(("u", "v", "x1"), base={"v": 1})
    g = Metric.from_entries(chart, {("u", "v"): 1, ("x1", "x1"): chart.parse("1 + v^2")})
    with pytest.raises(NotTotallyGeodesic):
        leaf_curvature(g, Roles("u", "v", ("x1",)))


# --- metrics from frame data ----------------------------------------------------------------------------

def test_build_minkowski_from_frame():
    chart, roles = adapted_chart(1)
    cf = lambda c: VectorField.coordinate(chart, c)
    g = build_kundt_metric(cf("v"), [cf("x1")], cf("u"), [[0, 0], [0, 1]])
    assert g.rf == adapted_metric(chart, roles).rf


def test_build_suspension_is_kundt():
    inst = catalog.get("suspension_local")
    assert analyze(inst.metric, inst.V).kundt


def test_build_rejects_degenerate_input():
    chart, _ = adapted_chart(1)
    cf = lambda c: VectorField.coordinate(chart, c)
    with pytest.raises(FrameDegenerate):
        build_kundt_metric(cf("v"), [cf("x1")], cf("u"), [[0, 0], [0, 0]])
    with pytest.raises(FrameDegenerate):
        build_kundt_metric(cf("v"), [cf("v")], cf("u"), [[0, 0], [0, 1]])
    with pytest.raises(FrameDegenerate):
        build_kundt_metric(cf("v"), [cf("x1")], cf("u"), [[1, 0], [0, 1]])
    with pytest.raises(FrameDegenerate):
        build_kundt_metric(cf("v"), [], cf("u"), [[0]])


def test_build_detects_failed_flow_condition():
    chart, _ = adapted_chart(1)
    cf = lambda c: VectorField.coordinate(chart, c)
    h = [[0, 0], [0, chart.parse("1 + v^2")]]
    with pytest.raises(PostVerificationFailed):
        build_kundt_metric(cf("v"), [cf("x1")], cf("u"), h)
    g = build_kundt_metric(cf("v"), [cf("x1")], cf("u"), h, verify=False)
    assert not analyze(g, cf("v")).locally_kundt
