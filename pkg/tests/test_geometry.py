import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import adapted_chart, random_adapted, random_field, random_lorentzian
from kundt import catalog
from kundt.errors import ChartMismatch, DomainError, EvalError, InvalidMetric, NotAdapted, SingularMetric
from kundt.geometry import (Chart, Metric, VectorField, christoffel, covariant_derivative, integrate_geodesic,
                            inverse_metric, is_killing, lie_bracket, lie_derivative_metric, lie_derivative_pair,
                            metric_numeric, random_point, rf, riemann)
from kundt.expr.ratfunc import derivative, make_func
from kundt.hierarchy import Roles, adapted_metric, detect_kundt_form

CHART_ENTRIES = [n for n in catalog.names() if catalog.get(n).kind == "chart"]
seeds = st.integers(0, 2 ** 31)


def minkowski3():
    chart, roles = adapted_chart(1)
    return adapted_metric(chart, roles)


def vanishes(chart, comps):
    return all(chart.zero(c) for c in comps)


# --- charts and metrics ----------------------------------------------------------

def test_chart_rejects_bad_base_point():
    with pytest.raises(DomainError):
        Chart(("u", "y"), {"y": ("positive",)}, base={"y": -1})
    with pytest.raises(InvalidMetric):
        Chart(("u", "u"))


def test_metric_validation():
    chart = Chart(("t", "x"))
    with pytest.raises(SingularMetric):
        Metric(chart, [[0, 0], [0, 1]])
    with pytest.raises(InvalidMetric):
        Metric(chart, [[1, 0], [0, 1]])  # Riemannian
    with pytest.raises(InvalidMetric):
        Metric(chart, [[-1, chart.parse("t")], [0, 1]])  # not symmetric


def test_inverse_of_minkowski():
    g = minkowski3()
    inv = [[rf(x) for x in row] for row in inverse_metric(g)]
    want = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    assert all(inv[i][j] == rf(want[i][j]) for i in range(3) for j in range(3))


def test_inverse_of_ads_against_numeric_inversion():
    g = catalog.get("ads_poincare").metric
    inv = inverse_metric(g)
    ix = g.chart.index
    assert g.chart.zero(rf(inv[ix["y2"]][ix["y2"]]) - rf(g.chart.parse("y2^2")))
    f = metric_numeric(g)
    rng = np.random.default_rng(0)
    flat = [x for row in g.inverse_rf() for x in row]
    for _ in range(10):
        x = random_point(g.chart, rng)
        sym = g.chart.eval_at(flat, dict(zip(g.chart.coords, x))).reshape(4, 4)
        np.testing.assert_allclose(sym, np.linalg.inv(f(x)), rtol=1e-12, atol=1e-12)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_inverse_times_metric_is_identity(seed):
    g = random_lorentzian(np.random.default_rng(seed), 3)
    inv = g.inverse_rf()
    for i in range(3):
        for j in range(3):
            acc = sum((g.rf[i][k] * inv[k][j] for k in range(3)), rf(0))
            assert g.chart.zero(acc - rf(int(i == j)))


# --- connection ---------------------------------------------------------------------

def test_minkowski_connection_vanishes():
    G = christoffel(minkowski3()).rf
    assert all(x.is_zero for a in G for b in a for x in b)


def test_pp_wave_christoffel_symbols():
    inst = catalog.get("pp_wave")
    g, chart = inst.metric, inst.chart
    H = g.entry("u", "u")
    gam = christoffel(g)
    Hr = rf(H)
    half = rf(1) / 2
    expected = {("v", "u", "u"): half * derivative(Hr, "u")}
    for x in ("x1", "x2"):
        expected[("v", "u", x)] = expected[("v", x, "u")] = half * derivative(Hr, x)
        expected[(x, "u", "u")] = -half * derivative(Hr, x)
    for k in chart.coords:
        for i in chart.coords:
            for j in chart.coords:
                want = expected.get((k, i, j), rf(0))
                assert chart.zero(rf(gam.component(k, i, j)) - want), (k, i, j)


def test_conformal_christoffel_identity():
    inst = catalog.get("kundt_generic")
    g, chart = inst.metric, inst.chart
    sigma = rf(chart.parse("u*x1 + x2^2/3"))
    g2 = Metric(chart, [[make_func("exp", sigma) * x for x in row] for row in g.rf])
    G, G2 = g.gamma_rf(), g2.gamma_rf()
    inv = g.inverse_rf()
    ds = [derivative(sigma, c) for c in chart.coords]
    grad = [sum((inv[k][l] * ds[l] for l in range(4)), rf(0)) for k in range(4)]
    half = rf(1) / 2
    for k in range(4):
        for i in range(4):
            for j in range(4):
                corr = -g.rf[i][j] * grad[k]
                if k == i:
                    corr = corr + ds[j]
                if k == j:
                    corr = corr + ds[i]
                assert chart.zero(G2[k][i][j] - G[k][i][j] - half * corr)


# --- curvature -------------------------------------------------------------------------

def test_minkowski_is_flat():
    assert riemann(catalog.get("minkowski").metric).is_flat()


def test_plane_wave_curvature_component():
    chart, roles = adapted_chart(1)
    g = adapted_metric(chart, roles, chart.parse("x1^2"))
    R = riemann(g)
    assert rf(R.component("v", "x1", "u", "x1")) == rf(-1)
    assert not R.is_flat()


@pytest.mark.parametrize("name", CHART_ENTRIES)
def test_riemann_antisymmetry_and_bianchi(name):
    g = catalog.get(name).metric
    R = g.riemann_rf()
    z = g.chart.zero
    d = g.dim
    for l in range(d):
        for k in range(d):
            for i in range(d):
                for j in range(d):
                    assert z(R[l][k][i][j] + R[l][k][j][i])
                    assert z(R[l][k][i][j] + R[l][i][j][k] + R[l][j][k][i])


# --- fields ------------------------------------------------------------------------------

def test_pp_wave_acceleration_of_du():
    inst = catalog.get("pp_wave")
    g, chart = inst.metric, inst.chart
    du = VectorField.coordinate(chart, "u")
    acc = covariant_derivative(g, du, du)
    H = rf(g.entry("u", "u"))
    half = rf(1) / 2
    want = [rf(0), half * derivative(H, "u"), -half * derivative(H, "x1"), -half * derivative(H, "x2")]
    assert vanishes(chart, [a - b for a, b in zip(acc.rf, want)])


def test_dv_parallel_on_minkowski():
    g = minkowski3()
    dv = VectorField.coordinate(g.chart, "v")
    assert covariant_derivative(g, dv, dv).is_zero()


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_torsion_free_on_random_fields(seed):
    rng = np.random.default_rng(seed)
    g = random_lorentzian(rng, 3)
    X, Y = random_field(rng, g.chart), random_field(rng, g.chart)
    t = covariant_derivative(g, X, Y) - covariant_derivative(g, Y, X) - lie_bracket(X, Y)
    assert vanishes(g.chart, t.rf)


def test_bracket_examples():
    chart = Chart(("u", "v"))
    du, dv = VectorField.coordinate(chart, "u"), VectorField.coordinate(chart, "v")
    assert lie_bracket(du, dv).is_zero()
    udu = du.scaled(chart.parse("u"))
    assert vanishes(chart, (lie_bracket(udu, du) + du).rf)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_jacobi_for_random_fields(seed):
    rng = np.random.default_rng(seed)
    chart = Chart(("a", "b", "c"))
    X, Y, Z = (random_field(rng, chart) for _ in range(3))
    J = (lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X))
         + lie_bracket(Z, lie_bracket(X, Y)))
    assert vanishes(chart, J.rf)


def test_bracket_chart_mismatch():
    a = VectorField.coordinate(Chart(("u", "v")), "u")
    b = VectorField.coordinate(Chart(("p", "q")), "p")
    with pytest.raises(ChartMismatch):
        lie_bracket(a, b)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_lie_derivative_through_connection(seed):
    rng = np.random.default_rng(seed)
    g = random_lorentzian(rng, 3)
    X, Y, Z = (random_field(rng, g.chart, 1) for _ in range(3))
    lhs = lie_derivative_pair(g, X, Y, Z)
    rhs = g.inner(covariant_derivative(g, Y, X), Z) + g.inner(covariant_derivative(g, Z, X), Y)
    assert g.chart.zero(lhs - rhs)


def test_lie_derivative_examples():
    g = minkowski3()
    chart = g.chart
    dv = VectorField.coordinate(chart, "v")
    L = lie_derivative_metric(g, dv.scaled(chart.parse("v")))
    assert L[0][1] == rf(1)
    assert all(lie_derivative_metric(g, VectorField.coordinate(chart, "u"))[i][j].is_zero
               for i in range(3) for j in range(3))
    ga, _, V = random_adapted(np.random.default_rng(1), 2)
    La = lie_derivative_metric(ga, V)
    assert all(ga.chart.zero(La[i][j]) for i in (2, 3) for j in (2, 3))


def test_killing_examples():
    g = minkowski3()
    chart = g.chart
    assert not is_killing(g, VectorField.coordinate(chart, "v").scaled(chart.parse("v")))
    for seed in range(5):
        gb, _, V = random_adapted(np.random.default_rng(seed), 2, brinkmann=True)
        assert is_killing(gb, V)
    c3, roles = adapted_chart(1)
    pw = adapted_metric(c3, roles, c3.parse("x1^2"))
    X = VectorField(c3, [0, c3.parse("-exp(u)*x1"), c3.parse("exp(u)")])
    assert is_killing(pw, X)
    Xbad = VectorField(c3, [0, c3.parse("-exp(u)*x1"), c3.parse("exp(-u)")])
    assert not is_killing(pw, Xbad)


# --- geodesics ---------------------------------------------------------------------------

def test_minkowski_geodesic_is_straight():
    g = minkowski3()
    v0 = np.array([1.0, 0.0, 0.0])
    path = integrate_geodesic(g, [0, 0, 0], v0, 2.0, 64)
    np.testing.assert_allclose(path.points, path.times[:, None] * v0[None, :], atol=1e-15)


def test_geodesic_leaving_domain_raises():
    chart = Chart(("t", "x"), {"x": ("interval", -1, 1)})
    g = Metric(chart, [[-1, 0], [0, 1]])
    with pytest.raises(EvalError):
        integrate_geodesic(g, [0, 0], [1.0, 5.0], 2.0, 256)
    integrate_geodesic(g, [0, 0], [1.0, 0.4], 2.0, 256)


def test_geodesic_argument_checks():
    g = minkowski3()
    with pytest.raises(ValueError):
        integrate_geodesic(g, [0, 0, 0], [1, 0, 0], 1.0, 8)
    with pytest.raises(ChartMismatch):
        integrate_geodesic(g, [0, 0], [1, 0], 1.0, 32)


def test_adapted_roles_must_cover_chart():
    with pytest.raises(NotAdapted):
        detect_kundt_form(minkowski3(), Roles("u", "v", ()))
