import dataclasses

import pytest

from kundt import catalog
from kundt.errors import BadParameter, UnknownEntry
from kundt.hierarchy import leaf_is_flat
from kundt.metricfile import parse_metric_file


def test_roster_runs_clean():
    rows = catalog.run_all(seed=0)
    assert [r.name for r in rows] == catalog.names()
    assert all(r.passed for r in rows), [(r.name, r.details) for r in rows if not r.passed]


def test_corrupted_expectation_fails_one_row():
    entries = [catalog.get(n) for n in catalog.names()]
    i = catalog.names().index("pp_wave")
    entries[i] = dataclasses.replace(entries[i], expected_class="CahenWallach")
    rows = catalog.run_all(entries=entries)
    failed = [r for r in rows if not r.passed]
    assert [r.name for r in failed] == ["pp_wave"]
    assert "class" in failed[0].details[0]


def test_corrupted_report_expectation():
    inst = catalog.get("twisting_minkowski")
    bad = dataclasses.replace(inst, expected={**inst.expected, "twist_free": True})
    row = catalog.run_entry(bad)
    assert not row.passed and any("twist_free" in d for d in row.details)


def test_lookup_errors():
    with pytest.raises(UnknownEntry):
        catalog.get("nosuch")
    with pytest.raises(BadParameter):
        catalog.get("minkowski", radius=3)
    with pytest.raises(BadParameter):
        catalog.get("minkowski", dim=1)


def test_defaults_and_parameters():
    assert catalog.get("minkowski").params == {"dim": 4}
    assert catalog.get("minkowski").metric.dim == 4
    assert catalog.get("minkowski", dim=3).metric.dim == 3
    assert catalog.get("ads_poincare", dim=3).metric.dim == 3


@pytest.mark.parametrize("name", ["pp_wave", "plane_wave", "cahen_wallach"])
def test_pp_wave_leaves_flat(name):
    inst = catalog.get(name)
    assert leaf_is_flat(inst.metric, inst.roles)


@pytest.mark.parametrize("name", catalog.names())
def test_show_text_round_trips(name):
    inst = catalog.get(name)
    doc = parse_metric_file(inst.to_text())
    if inst.kind == "algebra":
        a, b = inst.algebra, doc.algebra
        assert a.L.basis == b.L.basis and a.L.c == b.L.c
        assert a.m.m == b.m.m and tuple(a.V) == tuple(b.V)
        return
    chart = inst.chart
    assert doc.chart.coords == chart.coords
    assert all(chart.zero(x - y) for ra, rb in zip(inst.metric.rf, doc.metric.rf) for x, y in zip(ra, rb))
    assert all(chart.zero(x - y) for x, y in zip(inst.V.rf, doc.fields["V"].rf))
    if inst.roles is not None:
        assert doc.roles == inst.roles
