"""Seeded generators of random polynomial data shared by the test modules."""

from fractions import Fraction

import numpy as np

from kundt.geometry import Chart, Metric, VectorField
from kundt.hierarchy import Roles, adapted_metric


def random_coef(rng, num=3, den=3):
    while True:
        c = Fraction(int(rng.integers(-num, num + 1)), int(rng.integers(1, den + 1)))
        if c:
            return c


def random_monomial(rng, names, degree):
    return [names[int(rng.integers(len(names)))] for _ in range(degree)]


def poly_text(rng, names, max_degree=3, terms=4, constant=True, scale=1):
    """Sum of ``terms`` random monomials of degree <= ``max_degree`` as parseable text."""
    out = []
    lo = 0 if constant else 1
    for _ in range(terms):
        c = random_coef(rng) * Fraction(scale)
        mono = random_monomial(rng, names, int(rng.integers(lo, max_degree + 1)))
        out.append("*".join([f"({c})"] + mono))
    return " + ".join(out) if out else "0"


def adapted_chart(n):
    xs = tuple(f"x{i + 1}" for i in range(n))
    return Chart(("u", "v") + xs), Roles("u", "v", xs)


def random_adapted(rng, n, v_perturb=False, brinkmann=False):
    """Random metric in adapted form with ``h`` equal to the identity at the base point.

    ``v_perturb`` adds a ``v``-dependent term to ``h_11``; ``brinkmann`` keeps
    ``H`` and ``W`` free of ``v`` and ``h`` the identity.
    """
    chart, roles = adapted_chart(n)
    allv = list(chart.coords)
    noV = [c for c in allv if c != "v"]
    hv = noV if brinkmann else allv
    H = chart.parse(poly_text(rng, hv, 3, 4))
    W = [chart.parse(poly_text(rng, hv, 3, 3)) for _ in range(n)]
    if brinkmann:
        h = None
    else:
        h = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                p = poly_text(rng, noV, 2, 2, constant=False, scale=Fraction(1, 4))
                text = f"1 + {p}" if i == j else p
                if v_perturb and i == j == 0:
                    mono = "*".join(random_monomial(rng, allv, int(rng.integers(0, 2))) + ["v"])
                    text += f" + ({random_coef(rng)})*{mono}"
                h[i][j] = h[j][i] = chart.parse(text)
    g = adapted_metric(chart, roles, H, W, h)
    return g, roles, VectorField.coordinate(chart, "v")


def random_lorentzian(rng, dim=3, max_degree=2):
    """Symmetric polynomial metric equal to ``diag(-1, 1, ...)`` at the origin."""
    coords = tuple(f"y{i}" for i in range(dim))
    chart = Chart(coords)
    m = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            p = poly_text(rng, list(coords), max_degree, 2, constant=False, scale=Fraction(1, 4))
            if i == j:
                p = f"{-1 if i == 0 else 1} + {p}"
            m[i][j] = m[j][i] = chart.parse(p)
    return Metric(chart, m)


def random_field(rng, chart, max_degree=2):
    return VectorField(chart, [chart.parse(poly_text(rng, list(chart.coords), max_degree, 2))
                               for _ in chart.coords])


def null_velocity(g, p0, transverse):
    """Velocity with ``u``-component 1, given transverse part and ``v`` solving ``g(v, v) = 0``.

    Assumes chart order ``(u, v, x...)`` and ``g_vv = 0`` at ``p0``.
    """
    from kundt.geometry import metric_numeric

    G = metric_numeric(g)(p0)
    w = np.concatenate([[1.0, 0.0], np.asarray(transverse, dtype=float)])
    lin = 2.0 * (G[1] @ w)
    const = w @ G @ w
    w[1] = -const / lin
    return w
