import os
import subprocess
import sys

import numpy as np
import pytest

from kundt import _backend, catalog
from kundt.expr import Program, parse
from kundt.geometry import integrate_geodesic

needs_compiled = pytest.mark.skipif(not _backend.compiled_available(), reason="compiled kernels not built")


@pytest.fixture
def restore_backend():
    name = _backend.NAME
    yield
    _backend.use(name)


def _run(name, prog, pts):
    _backend.use(name)
    return prog.run(pts)


@needs_compiled
def test_eval_batch_parity(restore_backend):
    coords = ("u", "v", "x")
    texts = ["u*v - x^3/7", "exp(u)*sin(v) + cos(x)^2", "1/(u - v)", "log(x)", "sqrt(u*u + 1)/(1 + v^2)",
             "(u + v + x)^5"]
    prog = Program([parse(t, coords) for t in texts], coords)
    pts = np.random.default_rng(0).uniform(-2, 2, (500, 3))
    pts[0] = [1.0, 1.0, 0.5]  # pole of 1/(u - v)
    a = _run("compiled", prog, pts)
    b = _run("python", prog, pts)
    np.testing.assert_array_equal(a[2], b[2])
    ok = a[2] == 0
    np.testing.assert_allclose(a[0][ok], b[0][ok], rtol=1e-14, atol=0)
    np.testing.assert_allclose(a[1][ok], b[1][ok], rtol=1e-14, atol=0)
    assert a[2][0] != 0


@needs_compiled
@pytest.mark.parametrize("name", ["pp_wave", "ads_poincare", "siklos"])
def test_rk4_parity(name, restore_backend):
    g = catalog.get(name).metric
    p0 = [g.chart.base[c] for c in g.chart.coords]
    v0 = np.array([1.0, 0.1, 0.2, 0.1])
    _backend.use("compiled")
    a = integrate_geodesic(g, p0, v0, 1.0, 256)
    _backend.use("python")
    b = integrate_geodesic(g, p0, v0, 1.0, 256)
    np.testing.assert_allclose(a.points, b.points, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(a.velocities, b.velocities, rtol=1e-12, atol=1e-14)


def test_environment_forces_fallback():
    env = dict(os.environ, KUNDT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from kundt import _backend; print(_backend.NAME)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        _backend.use("fortran")
