"""Command-line front end.

Exit codes: 0 pass, 1 analyzable but negative, 2 input or precondition error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__, catalog
from .congruence import analyze
from .errors import KundtError, MetricFileError
from .hierarchy import full_classification
from .liealg import analyze_algebraic, check_jacobi
from .metricfile import parse_metric_file

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


def _box(text):
    try:
        lo, hi = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("--box expects lo,hi") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError("--box needs lo < hi")
    return lo, hi


def _common(p):
    p.add_argument("--seed", type=int, default=0, help="seed for the randomized zero test")
    p.add_argument("--box", type=_box, default=None, help="sampling box lo,hi for every coordinate")
    p.add_argument("--json", action="store_true", help="emit a JSON report")


def build_parser():
    parser = argparse.ArgumentParser(prog="kundt", description="Check and classify Kundt-type metrics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", help="analyze a lightlike field on a metric file")
    p.add_argument("file")
    p.add_argument("--field", default="V", help="name of the [field ...] section (default V)")
    _common(p)
    p = sub.add_parser("classify", help="classify a metric given in adapted coordinates")
    p.add_argument("file")
    _common(p)
    p = sub.add_parser("catalog", help="list, show or self-test the built-in examples")
    p.add_argument("action", choices=["list", "show", "run"])
    p.add_argument("name", nargs="?")
    _common(p)
    return parser


def _read(path):
    with open(path, "rb") as fh:
        data = fh.read()
    return data.decode("utf-8"), hashlib.sha256(data).hexdigest()


def _emit(doc, as_json, human_lines, out):
    if as_json:
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(human_lines) + "\n")


def _fmt_bool(v):
    return "n/a" if v is None else str(v).lower()


def _base_doc(args, digest):
    return {"tool": "kundt", "version": __version__, "input_sha256": digest, "seed": args.seed,
            "box": list(args.box) if args.box else None}


def cmd_check(args, out):
    text, digest = _read(args.file)
    doc = parse_metric_file(text, seed=args.seed, box=args.box)
    report = _base_doc(args, digest)
    t0 = time.perf_counter()
    if doc.metric is None:
        if doc.algebra is None:
            raise MetricFileError("nothing to check: no [metric] or [algebra] section")
        a = doc.algebra
        rep = analyze_algebraic(a.L, a.m, a.V).as_dict()
        rep["jacobi"] = check_jacobi(a.L)
        report["algebra"] = rep
        report["timings"] = {"analyze_seconds": time.perf_counter() - t0}
        lines = [f"{k}: {_fmt_bool(v)}" for k, v in sorted(rep.items())]
        _emit(report, args.json, lines, out)
        return EXIT_OK if rep["algebraic_kundt"] and rep["jacobi"] else EXIT_NEGATIVE
    if args.field not in doc.fields:
        raise MetricFileError(f"no [field {args.field}] section")
    rep = analyze(doc.metric, doc.fields[args.field])
    report["congruence"] = rep.as_dict()
    report["alpha"] = report["congruence"].pop("alpha")
    report["timings"] = {"analyze_seconds": time.perf_counter() - t0}
    lines = [f"{k}: {_fmt_bool(v)}" for k, v in rep.booleans().items()]
    if rep.kappa is not None and not rep.geodesic:
        lines.append(f"pre-geodesic factor: {rep.kappa}")
    lines += [f"alpha({k}) = {v}" for k, v in rep.alpha.items()]
    lines += [f"note: {n}" for n in rep.notes]
    _emit(report, args.json, lines, out)
    return EXIT_OK if rep.kundt else EXIT_NEGATIVE


def _matrix_str(m):
    return "[" + ",".join("[" + ",".join(str(x) for x in row) + "]" for row in m) + "]"


def cmd_classify(args, out, err):
    text, digest = _read(args.file)
    doc = parse_metric_file(text, seed=args.seed, box=args.box)
    if doc.metric is None:
        raise MetricFileError("classify needs a [metric] section")
    if doc.roles is None:
        raise MetricFileError("classify needs a [roles] section")
    t0 = time.perf_counter()
    rep = full_classification(doc.metric, doc.roles)
    report = _base_doc(args, digest)
    report["classification"] = rep.as_dict()
    report["leaf_flat"] = rep.leaf_flat
    report["timings"] = {"classify_seconds": time.perf_counter() - t0}
    if rep.most_specific is None:
        for n in rep.notes:
            err.write(f"error: {n}\n")
        if args.json:
            _emit(report, True, [], out)
        return EXIT_INPUT
    head = rep.most_specific
    if "S" in rep.payload:
        head += f", S={_matrix_str(rep.payload['S'])}"
    elif "H" in rep.payload:
        head += f", H={rep.payload['H']}"
    lines = [head] + [f"{k}: {_fmt_bool(v)}" for k, v in rep.predicates.items()]
    if "conformal_factor" in rep.payload:
        lines.append(f"conformal factor: {rep.payload['conformal_factor']}")
    lines.append(f"leaf_flat: {_fmt_bool(rep.leaf_flat)}")
    lines += [f"note: {n}" for n in rep.notes]
    _emit(report, args.json, lines, out)
    return EXIT_OK


def cmd_catalog(args, out):
    if args.action == "list":
        if args.json:
            _emit({"entries": catalog.names()}, True, [], out)
        else:
            out.write("\n".join(catalog.names()) + "\n")
        return EXIT_OK
    if args.action == "show":
        if not args.name:
            raise catalog.UnknownEntry("catalog show needs an entry name")
        out.write(catalog.get(args.name).to_text())
        return EXIT_OK
    entries = [catalog.get(args.name)] if args.name else None
    t0 = time.perf_counter()
    rows = catalog.run_all(seed=args.seed, entries=entries)
    total = time.perf_counter() - t0
    ok = all(r.passed for r in rows)
    if args.json:
        doc = {"tool": "kundt", "version": __version__, "seed": args.seed, "passed": ok,
               "rows": [r.as_dict() for r in rows],
               "timings": {"total_seconds": total, **{r.name: r.seconds for r in rows}}}
        _emit(doc, True, [], out)
    else:
        width = max(len(r.name) for r in rows)
        lines = [f"{'entry'.ljust(width)}  result  details"]
        for r in rows:
            lines.append(f"{r.name.ljust(width)}  {'PASS' if r.passed else 'FAIL'}    {'; '.join(r.details)}".rstrip())
        lines.append(f"{sum(r.passed for r in rows)}/{len(rows)} passed in {total:.2f} s")
        _emit(None, False, lines, out)
    return EXIT_OK if ok else EXIT_NEGATIVE


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        if args.command == "check":
            return cmd_check(args, out)
        if args.command == "classify":
            return cmd_classify(args, out, err)
        return cmd_catalog(args, out)
    except (KundtError, OSError, UnicodeDecodeError) as e:
        err.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
