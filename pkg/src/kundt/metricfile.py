"""Plain-text metric description files.

Example::

    # comments start with '#'
    [chart]
    coords: u, v, x1, x2
    constraint: x2 > 0
    base: u=0, v=0, x1=0, x2=1
    params: a=1

    [metric]
    g(u,v) = 1/x2^2
    g(x1,x1) = 1/x2^2

    [field V]
    components: 0, 1, 0, 0

    [roles]
    u=u, v=v, transverse=x1, x2

    [algebra]
    basis: T, X, Y, Z
    bracket(X,Y) = Z
    ip(T,Z) = 1
    V = Z

Unspecified metric entries are zero; ``g(a,b)`` also sets ``g(b,a)``.
Constraints are ``x > 0`` or ``lo < x < hi``.  Field components may also be
given per coordinate as ``v = 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ExprSyntaxError, KundtError, MetricFileError
from .expr import canon, to_tree
from .geometry import Chart, Metric, VectorField
from .hierarchy import Roles
from .liealg import InvariantMetric, LieAlgebra

_SECTION = re.compile(r"^\[\s*([a-zA-Z]+)(?:\s+([A-Za-z_][A-Za-z0-9_]*))?\s*\]$")
_ENTRY = re.compile(r"^g\(\s*(\w+)\s*,\s*(\w+)\s*\)\s*=\s*(.+)$")
_PAIR = re.compile(r"^(bracket|ip)\(\s*(\w+)\s*,\s*(\w+)\s*\)\s*=\s*(.+)$")
_POS = re.compile(r"^(\w+)\s*>\s*0$")
_INTERVAL = re.compile(r"^([-+0-9./eE]+)\s*<\s*(\w+)\s*<\s*([-+0-9./eE]+)$")


@dataclass
class AlgebraSpec:
    L: LieAlgebra
    m: InvariantMetric
    V: tuple


@dataclass
class MetricDocument:
    chart: Chart | None = None
    metric: Metric | None = None
    fields: dict = field(default_factory=dict)
    roles: Roles | None = None
    algebra: AlgebraSpec | None = None


def _split_csv(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _kv_list(text, lineno):
    out = []
    for item in _split_csv(text):
        if "=" in item:
            k, v = item.split("=", 1)
            out.append([k.strip(), [v.strip()]])
        elif out:
            out[-1][1].append(item)
        else:
            raise MetricFileError(f"expected name=value, got {item!r}", lineno)
    return out


def parse_metric_file(text, seed=0, box=None) -> MetricDocument:
    """Parse a document; raises ``MetricFileError`` with a line number on bad input."""
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            current = (m.group(1).lower(), m.group(2), [])
            sections.append(current)
            continue
        if current is None:
            raise MetricFileError("content before the first section header", lineno)
        current[2].append((lineno, line))
    doc = MetricDocument()
    by_kind = {}
    for kind, name, lines in sections:
        if kind not in ("chart", "metric", "field", "roles", "algebra"):
            raise MetricFileError(f"unknown section [{kind}]", lines[0][0] if lines else None)
        by_kind.setdefault(kind, []).append((name, lines))
    for kind in ("chart", "metric", "roles", "algebra"):
        if len(by_kind.get(kind, [])) > 1:
            raise MetricFileError(f"section [{kind}] appears twice")
    try:
        if "chart" in by_kind:
            doc.chart = _parse_chart(by_kind["chart"][0][1], seed, box)
        if "metric" in by_kind:
            if doc.chart is None:
                raise MetricFileError("[metric] requires a [chart] section")
            doc.metric = _parse_metric(doc.chart, by_kind["metric"][0][1])
        for name, lines in by_kind.get("field", []):
            if doc.chart is None:
                raise MetricFileError("[field] requires a [chart] section")
            doc.fields[name or "V"] = _parse_field(doc.chart, lines)
        if "roles" in by_kind:
            doc.roles = _parse_roles(by_kind["roles"][0][1])
        if "algebra" in by_kind:
            doc.algebra = _parse_algebra(by_kind["algebra"][0][1])
    except MetricFileError:
        raise
    except KundtError as e:
        raise MetricFileError(str(e)) from e
    if doc.chart is None and doc.algebra is None:
        raise MetricFileError("document needs a [chart] or an [algebra] section")
    return doc


def _parse_chart(lines, seed, box):
    coords, constraints, base, params = None, {}, {}, {}
    for lineno, line in lines:
        key, _, rest = line.partition(":")
        key = key.strip().lower()
        rest = rest.strip()
        if key == "coords":
            coords = _split_csv(rest)
        elif key == "constraint":
            m = _POS.match(rest)
            mi = _INTERVAL.match(rest)
            if m:
                constraints[m.group(1)] = ("positive",)
            elif mi:
                constraints[mi.group(2)] = ("interval", float(Fraction(mi.group(1))), float(Fraction(mi.group(3))))
            else:
                raise MetricFileError(f"cannot read constraint {rest!r}", lineno)
        elif key in ("base", "params"):
            target = base if key == "base" else params
            for k, vals in _kv_list(rest, lineno):
                try:
                    target[k] = float(Fraction(vals[0]))
                except (ValueError, ZeroDivisionError):
                    raise MetricFileError(f"bad number {vals[0]!r}", lineno) from None
        else:
            raise MetricFileError(f"unknown chart key {key!r}", lineno)
    if not coords:
        raise MetricFileError("[chart] needs a coords line")
    for k in base:
        if k not in coords:
            raise MetricFileError(f"base point names unknown coordinate {k}")
    return Chart(coords, constraints, base, params, seed=seed, box=box)


def _expr(chart, text, lineno):
    try:
        return chart.parse(text)
    except ExprSyntaxError as e:
        raise MetricFileError(f"{e}", lineno) from None


def _parse_metric(chart, lines):
    entries = {}
    for lineno, line in lines:
        m = _ENTRY.match(line)
        if not m:
            raise MetricFileError(f"expected g(a,b) = expr, got {line!r}", lineno)
        a, b, text = m.groups()
        for c in (a, b):
            if c not in chart.index:
                raise MetricFileError(f"unknown coordinate {c}", lineno)
        key = tuple(sorted((a, b), key=chart.index.get))
        if key in entries:
            raise MetricFileError(f"g({a},{b}) given twice", lineno)
        entries[key] = _expr(chart, text, lineno)
    return Metric.from_entries(chart, entries)


def _parse_field(chart, lines):
    comps = None
    named = {}
    for lineno, line in lines:
        if line.lower().startswith("components:"):
            parts = _split_csv(line.split(":", 1)[1])
            if len(parts) != chart.dim:
                raise MetricFileError(f"expected {chart.dim} components, got {len(parts)}", lineno)
            comps = [_expr(chart, p, lineno) for p in parts]
        elif "=" in line:
            k, v = line.split("=", 1)
            k = k.strip()
            if k not in chart.index:
                raise MetricFileError(f"unknown coordinate {k}", lineno)
            named[k] = _expr(chart, v.strip(), lineno)
        else:
            raise MetricFileError(f"cannot read field line {line!r}", lineno)
    if comps is None:
        comps = [named.get(c, 0) for c in chart.coords]
    return VectorField(chart, comps)


def _parse_roles(lines):
    items = []
    for lineno, line in lines:
        items += _kv_list(line, lineno)
    d = {k.strip().lower(): v for k, v in items}
    if "u" not in d or "v" not in d:
        raise MetricFileError("[roles] needs u= and v=")
    trans = []
    for t in d.get("transverse", []):
        trans += t.split()
    return Roles(d["u"][0], d["v"][0], tuple(trans))


def _linear(basis, text, lineno):
    """Rational linear combination of basis names."""
    from .expr import parse
    try:
        r = canon(parse(text, basis))
    except ExprSyntaxError as e:
        raise MetricFileError(str(e), lineno) from None
    if not r.is_polynomial:
        raise MetricFileError(f"{text!r} is not a linear combination of basis vectors", lineno)
    scale = next(iter(r.den.values()))
    out = {}
    for mono, c in r.num.items():
        if len(mono) != 1 or mono[0][1] != 1:
            raise MetricFileError(f"{text!r} is not a linear combination of basis vectors", lineno)
        out[mono[0][0].name] = c / scale
    return out


def _parse_algebra(lines):
    basis, brackets, ips, V = None, {}, {}, None
    for lineno, line in lines:
        if line.lower().startswith("basis:"):
            basis = _split_csv(line.split(":", 1)[1])
            continue
        if basis is None:
            raise MetricFileError("basis: must come first in [algebra]", lineno)
        m = _PAIR.match(line)
        if m:
            kind, a, b, text = m.groups()
            for c in (a, b):
                if c not in basis:
                    raise MetricFileError(f"unknown basis vector {c}", lineno)
            if kind == "bracket":
                brackets[(a, b)] = _linear(basis, text, lineno)
            else:
                try:
                    ips[(a, b)] = Fraction(text.strip())
                except ValueError:
                    raise MetricFileError(f"bad number {text!r}", lineno) from None
            continue
        if line.startswith("V") and "=" in line:
            V = _linear(basis, line.split("=", 1)[1], lineno)
            continue
        raise MetricFileError(f"cannot read algebra line {line!r}", lineno)
    if basis is None or V is None:
        raise MetricFileError("[algebra] needs basis: and V = lines")
    L = LieAlgebra(basis, brackets)
    return AlgebraSpec(L, InvariantMetric.from_pairs(L, ips), L.vector(V))


# --- writing ---------------------------------------------------------------

def _num(x):
    f = Fraction(x).limit_denominator(10 ** 12)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def dump_chart(chart: Chart):
    out = ["[chart]", "coords: " + ", ".join(chart.coords)]
    for c, con in chart.constraints.items():
        if con[0] == "positive":
            out.append(f"constraint: {c} > 0")
        else:
            out.append(f"constraint: {_num(con[1])} < {c} < {_num(con[2])}")
    out.append("base: " + ", ".join(f"{c}={_num(chart.base[c])}" for c in chart.coords))
    if chart.params:
        out.append("params: " + ", ".join(f"{k}={_num(v)}" for k, v in chart.params.items()))
    return out


def dump_document(chart=None, metric=None, fields=None, roles=None, algebra=None, comments=()):
    """Serialize back to the file format (round-trips through :func:`parse_metric_file`)."""
    out = [f"# {c}" for c in comments]
    if chart is not None:
        out += dump_chart(chart)
    if metric is not None:
        out += ["", "[metric]"]
        cs = metric.chart.coords
        for i in range(len(cs)):
            for j in range(i, len(cs)):
                x = metric.rf[i][j]
                if not x.is_zero:
                    out.append(f"g({cs[i]},{cs[j]}) = {to_tree(x)}")
    for name, V in (fields or {}).items():
        out += ["", f"[field {name}]", "components: " + ", ".join(str(c) for c in V.components)]
    if roles is not None:
        out += ["", "[roles]", f"u={roles.u}, v={roles.v}"
                + (", transverse=" + ", ".join(roles.transverse) if roles.transverse else "")]
    if algebra is not None:
        L, m, V = algebra.L, algebra.m, algebra.V
        out += ["", "[algebra]", "basis: " + ", ".join(L.basis)]
        n = L.dim
        for i in range(n):
            for j in range(i + 1, n):
                br = L.c[i][j]
                if any(br):
                    out.append(f"bracket({L.basis[i]},{L.basis[j]}) = {_combo(L.basis, br)}")
        for i in range(n):
            for j in range(i, n):
                if m.m[i][j]:
                    out.append(f"ip({L.basis[i]},{L.basis[j]}) = {_num(m.m[i][j])}")
        out.append(f"V = {_combo(L.basis, V)}")
    return "\n".join(out).lstrip("\n") + "\n"


def _combo(basis, vec):
    parts = []
    for name, c in zip(basis, vec):
        if not c:
            continue
        mag = abs(c)
        coef = "" if mag == 1 else f"{_num(mag)}*"
        sign = "-" if c < 0 else "+"
        parts.append((sign, f"{coef}{name}"))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, t in parts[1:]:
        s += f" {sign} {t}"
    return s


__all__ = ["AlgebraSpec", "MetricDocument", "dump_document", "parse_metric_file"]
