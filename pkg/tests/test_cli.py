import io
import json

import pytest

from kundt import catalog
from kundt.cli import main

MINKOWSKI = """\
[chart]
coords: u, v, x1, x2

[metric]
g(u,v) = 1
g(x1,x1) = 1
g(x2,x2) = 1

[field V]
components: 0, 1, 0, 0

[field U]
u = 1

[roles]
u=u, v=v, transverse=x1, x2
"""

V_DEPENDENT = """\
[chart]
coords: u, v, x1
base: v=1

[metric]
g(u,v) = 1
g(x1,x1) = v^2

[field V]
v = 1

[roles]
u=u, v=v, transverse=x1
"""


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(text, name="m.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def test_check_kundt_field(write):
    path = write(MINKOWSKI)
    code, out, _ = run("check", path)
    assert code == 0 and "kundt: true" in out
    assert run("check", path, "--field", "U")[0] == 0


def test_check_twisting_field(write):
    path = write(catalog.get("twisting_minkowski").to_text())
    code, out, _ = run("check", path)
    assert code == 1 and "twist_free: false" in out


def test_check_algebra_file(write):
    code, out, _ = run("check", write(catalog.get("oscillator").to_text()))
    assert code == 0 and "algebraic_kundt: true" in out


@pytest.mark.parametrize("text", [
    "[metric]\ng(u,v) = 1\n",
    "[chart]\ncoords: u, v\n[metric]\ng(u,w) = 1\n",
    "[chart]\ncoords: u, v\n[metric]\ng(u,v) = 1 +\n",
    "[nonsense]\n",
])
def test_malformed_files_exit_2(write, text):
    code, _, err = run("check", write(text))
    assert code == 2 and err.startswith("error:")


def test_missing_field_and_file(write):
    assert run("check", write(MINKOWSKI), "--field", "Q")[0] == 2
    assert run("check", "/nonexistent/metric.txt")[0] == 2


def test_classify_cahen_wallach(write):
    code, out, _ = run("classify", write(catalog.get("cahen_wallach").to_text()))
    assert code == 0
    assert out.splitlines()[0] == "CahenWallach, S=[[1,0],[0,1]]"


def test_classify_siklos(write):
    code, out, _ = run("classify", write(catalog.get("siklos").to_text()))
    assert code == 0
    assert out.splitlines()[0] == "Siklos, H=x1"


def test_classify_rejects_v_dependent_transverse_metric(write):
    code, _, err = run("classify", write(V_DEPENDENT))
    assert code == 2 and "d_v h" in err


def test_catalog_commands():
    code, out, _ = run("catalog", "list")
    assert code == 0 and out.split() == catalog.names()
    code, out, _ = run("catalog", "show", "pp_wave")
    assert code == 0 and "[metric]" in out
    assert run("catalog", "show", "nosuch")[0] == 2
    assert run("catalog", "show")[0] == 2
    code, out, _ = run("catalog", "run")
    assert code == 0 and out.strip().splitlines()[-1].startswith(f"{len(catalog.names())}/{len(catalog.names())} passed")


@pytest.mark.parametrize("box", ["1", "3,1", "a,b"])
def test_bad_box(write, box):
    assert run("check", write(MINKOWSKI), "--box", box)[0] == 2


def test_box_is_used(write):
    code, out, _ = run("check", write(MINKOWSKI), "--box=-1,1", "--json")
    assert code == 0 and json.loads(out)["box"] == [-1.0, 1.0]


def test_json_report_keys(write):
    code, out, _ = run("check", write(MINKOWSKI), "--json", "--seed", "5")
    doc = json.loads(out)
    assert {"tool", "version", "input_sha256", "seed", "congruence", "alpha", "timings"} <= set(doc)
    assert doc["seed"] == 5 and doc["congruence"]["kundt"] is True
    code, out, _ = run("classify", write(MINKOWSKI), "--json")
    doc = json.loads(out)
    assert doc["classification"]["class"] == "PpWave"
    code, out, _ = run("catalog", "run", "siklos", "--json")
    doc = json.loads(out)
    assert doc["passed"] and [r["name"] for r in doc["rows"]] == ["siklos"]


def test_usage_errors():
    assert run()[0] == 2
    assert run("frobnicate")[0] == 2
