"""Command-line interface: eval, scan, transitions, stability, verify, models.

Exit codes: 0 success, 1 usage error, 2 domain error (the violated predicate
is named), 3 other evaluation error, 4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import analysis as an
from .errors import DomainError, GTDError, ParamError
from .geometry import Metric2
from .models import DEFAULT_ENSEMBLE, ModelId, catalog_entry, make_model, model_catalog
from .thermo import APPLICABLE

SCHEMA = "gtd/1"
COMMANDS = ("eval", "scan", "transitions", "stability", "verify", "models")
CONFIG_KEYS = ("model", "entropy", "ensemble", "params", "at", "grid", "sweep", "out", "format",
               "seed", "tol", "samples")

EXIT_USAGE, EXIT_DOMAIN, EXIT_EVAL, EXIT_VERIFY = 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- parsing

def _number(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{what}: {text!r} is not a number") from None


def parse_assignments(text: str | None) -> dict:
    """'Q=1,alpha=-0.1' -> {'Q': 1.0, 'alpha': -0.1}."""
    out = {}
    if not text:
        return out
    for item in text.replace(" ", ",").split(","):
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"expected name=value, got {item!r}")
        k, v = item.split("=", 1)
        k = k.strip()
        if k in out:
            raise UsageError(f"{k} given twice")
        out[k] = _number(v.strip(), k)
    return out


def parse_range(text: str) -> tuple:
    """'S=0.2:5:500' -> ('S', 0.2, 5.0, 500)."""
    if "=" not in text:
        raise UsageError(f"expected name=lo:hi:n, got {text!r}")
    name, rng = text.split("=", 1)
    parts = rng.split(":")
    if len(parts) != 3:
        raise UsageError(f"expected lo:hi:n in {text!r}")
    lo, hi = _number(parts[0], name), _number(parts[1], name)
    try:
        n = int(parts[2])
    except ValueError:
        raise UsageError(f"{name}: sample count {parts[2]!r} is not an integer") from None
    if not lo < hi:
        raise UsageError(f"{name}: range needs lo < hi")
    if n < 2:
        raise UsageError(f"{name}: range needs n >= 2")
    return name.strip(), lo, hi, n


def parse_ranges(items: Sequence[str] | None) -> list:
    out = []
    for item in items or ():
        for piece in item.split(","):
            if piece.strip():
                out.append(parse_range(piece.strip()))
    return out


def read_config(path: str) -> list:
    """Turn a ``key = value`` file into flag arguments."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    args = []
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        args += [f"--{key}", value]
    return args


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--model", choices=("emgb", "emgb-lambda", "eymgb", "all"))
    common.add_argument("--entropy", choices=("area", "modified"))
    common.add_argument("--ensemble", choices=("mass", "entropy", "enthalpy", "gibbs"))
    common.add_argument("--params", help="model parameters and fixed inputs, e.g. Q=1,alpha=-0.1")
    common.add_argument("--at", help="state point, e.g. S=1 or T=1,phi=0")
    common.add_argument("--grid", action="append", help="name=lo:hi:n (one or two)")
    common.add_argument("--sweep", help="name=lo:hi:n")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float)
    common.add_argument("--samples", type=int, default=100)
    common.add_argument("--config", help="key = value file; flags win")

    parser = _Parser(prog="gtd", description="Geometrothermodynamics of Gauss-Bonnet black holes")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    helps = {
        "eval": "evaluate one state point",
        "scan": "CSV grid of thermodynamic and geometric quantities",
        "transitions": "locate critical loci along a sweep",
        "stability": "phase classification on a line or grid",
        "verify": "compare the jet pipeline with closed forms",
        "models": "list the model catalog",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _with_config(argv: list) -> list:
    """Insert config-file flags right after the command so that flags win."""
    if "--config" not in argv and not any(a.startswith("--config=") for a in argv):
        return argv
    path = None
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif a.startswith("--config="):
            path = a.split("=", 1)[1]
    if path is None:
        raise UsageError("--config needs a path")
    cmd = next((i for i, a in enumerate(argv) if a in COMMANDS), None)
    if cmd is None:
        raise UsageError("missing command")
    return argv[:cmd + 1] + read_config(path) + argv[cmd + 1:]


# -------------------------------------------------------------- formatting

def fmt_number(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    v = float(v)
    if math.isnan(v):
        return ""
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.17g}"


def jsonable(obj):
    """Infinities as strings, NaN as null, numpy scalars as Python numbers."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    return obj


def dump_json(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, allow_nan=False) + "\n"


def rows_to_csv(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([r[c] if isinstance(r.get(c), str) else fmt_number(r.get(c)) for c in columns])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- models

def _model_id(args) -> ModelId:
    if args.model is None:
        raise UsageError("--model is required")
    if args.model == "all":
        raise UsageError("--model all is only valid for verify and models")
    entropy = args.entropy or "area"
    ensemble = args.ensemble or DEFAULT_ENSEMBLE[(args.model, entropy)]
    return ModelId.of(args.model, entropy, ensemble)


def _bundle_and_inputs(args, extra_params: dict | None = None):
    """(bundle, state inputs) from --model/--params; parameters vs inputs split by name."""
    mid = _model_id(args)
    entry = catalog_entry(mid)
    assigned = parse_assignments(args.params)
    pnames = {s.name for s in entry.params}
    params = {k: v for k, v in assigned.items() if k in pnames}
    params.update(extra_params or {})
    inputs = {k: v for k, v in assigned.items() if k not in pnames}
    bad = sorted(set(inputs) - set(entry.inputs))
    if bad:
        raise ParamError(f"unknown parameter(s) for {mid}: {', '.join(bad)}")
    return make_model(mid, params), inputs


# --------------------------------------------------------------- commands

def cmd_eval(args) -> str:
    bundle, inputs = _bundle_and_inputs(args)
    at = parse_assignments(args.at)
    clash = set(at) & set(inputs)
    if clash:
        raise UsageError(f"{', '.join(sorted(clash))} given in both --params and --at")
    inputs.update(at)
    p = bundle.resolve(inputs)
    if p.batch_shape != ():
        raise UsageError("eval needs a single state point")
    bundle.eq.check_domain(p)
    e1, e2 = (float(x) for x in p.arrays())
    q = an.evaluate_state(bundle, {k: np.array([v]) for k, v in inputs.items()})
    row = an.scan_row(bundle, q, 0)
    if args.format == "csv":
        return rows_to_csv(an.SCAN_COLUMNS, [row])
    rep = bundle.eq.representation
    metric = Metric2(row["g11"] if row["g11"] is not None else math.nan, 0.0,
                     row["g22"] if row["g22"] is not None else math.nan)
    cap = APPLICABLE[rep.tag].value
    capv = row[cap]
    obj = {
        "schema": SCHEMA, "command": "eval", "model": str(bundle.id), "params": dict(bundle.params),
        "inputs": inputs, "point": {rep.coords[0]: e1, rep.coords[1]: e2},
        "T": row["T"],
        "conjugates": {rep.conjugates[0]: float(q["conj1"][0]), rep.conjugates[1]: float(q["conj2"][0])},
        "state": {k: float(np.asarray(q[k], float).reshape(-1)[0]) for k in ("S", "Q", "phi", "M")},
        "C_Q": row["C_Q"], "C_phi": row["C_phi"], "C_S": row["C_S"],
        "potentials": {k: row[k] for k in ("M", "H", "F", "G")},
        "metric": {"kind": "GTD", "g11": row["g11"], "g12": 0.0, "g22": row["g22"],
                   "detg": row["detg"], "signature": metric.signature},
        "R": row["R"],
        "flags": {"T_positive": row["T_positive"], "stable": row["stable"],
                  "domain_ok": row["domain_ok"],
                  "capacity_divergent": capv is not None and math.isinf(capv),
                  "entropy_negative": float(np.asarray(q["S"], float).reshape(-1)[0]) < 0},
    }
    return dump_json(obj)


def cmd_scan(args) -> str:
    axes = parse_ranges(args.grid)
    if not axes:
        raise UsageError("scan needs --grid name=lo:hi:n")
    if len(axes) > 2:
        raise UsageError("scan grids have one or two axes")
    bundle, inputs = _bundle_and_inputs(args)
    inputs.update(parse_assignments(args.at))
    rows = an.grid_scan(bundle, axes, inputs)
    if args.format == "json":
        return dump_json({"schema": SCHEMA, "command": "scan", "model": str(bundle.id),
                          "params": dict(bundle.params), "fixed": inputs,
                          "grid": [{"name": a[0], "lo": a[1], "hi": a[2], "n": a[3]} for a in axes],
                          "columns": list(an.SCAN_COLUMNS), "rows": rows})
    return rows_to_csv(an.SCAN_COLUMNS, rows)


def _sweep(args, inputs) -> an.SweepSpec:
    if not args.sweep:
        raise UsageError("transitions needs --sweep name=lo:hi:n")
    name, lo, hi, n = parse_range(args.sweep)
    return an.SweepSpec(name, lo, hi, n, dict(inputs))


def cmd_transitions(args) -> str:
    bundle, inputs = _bundle_and_inputs(args)
    inputs.update(parse_assignments(args.at))
    sweep = _sweep(args, inputs)
    tol = args.tol if args.tol is not None else an.DEFAULT_TOL
    loci = an.locate_transitions(bundle, sweep, tol)
    extrema = []
    if bundle.eq.representation.tag == "mass":
        extrema = [e.to_dict() for e in an.helmholtz_extrema(bundle, sweep, tol)]
    if args.format == "csv":
        cols = ("location", "indicator", "kind", "left_sign", "right_sign", "refined", "residual",
                "coincides_with")
        rows = []
        for L in loci:
            left, right = L.side_signs if L.side_signs else (None, None)
            rows.append({"location": L.location, "indicator": L.indicator, "kind": L.kind or "",
                         "left_sign": left, "right_sign": right, "refined": L.refined,
                         "residual": L.residual, "coincides_with": ";".join(L.coincides_with)})
        return rows_to_csv(cols, rows)
    cons = an.locus_consistency(loci)
    return dump_json({"schema": SCHEMA, "command": "transitions", "model": str(bundle.id),
                      "params": dict(bundle.params),
                      "sweep": {"variable": sweep.variable, "lo": sweep.lo, "hi": sweep.hi,
                                "samples": sweep.samples, "fixed": dict(sweep.fixed)},
                      "tol": tol, "loci": [L.to_dict() for L in loci],
                      "helmholtz_extrema": extrema, "consistency": cons})


def cmd_stability(args) -> str:
    axes = parse_ranges(args.grid or ([args.sweep] if args.sweep else None))
    if not 1 <= len(axes) <= 2:
        raise UsageError("stability needs one or two --grid axes")
    bundle, inputs = _bundle_and_inputs(args)
    inputs.update(parse_assignments(args.at))
    specs = [an.SweepSpec(n, lo, hi, k, dict(inputs), min_samples=2) for n, lo, hi, k in axes]
    grid = an.stability_scan(bundle, *specs)
    names = [a[0] for a in axes]
    if args.format == "csv":
        cols = tuple(names) + ("T_sign", "C_sign", "phase")
        rows = [dict(c.point, T_sign=c.T_sign, C_sign=c.C_sign, phase=c.phase) for c in grid.cells]
        return rows_to_csv(cols, rows)
    counts = {}
    for c in grid.cells:
        counts[c.phase] = counts.get(c.phase, 0) + 1
    bounds = []
    for a, b, pa, pb in grid.boundaries:
        bounds.append({"from": list(a), "to": list(b), "phases": [pa, pb],
                       "between": [grid.cell(*a).point, grid.cell(*b).point]})
    return dump_json({"schema": SCHEMA, "command": "stability", "model": str(bundle.id),
                      "params": dict(bundle.params), "fixed": inputs, "axes": names,
                      "shape": list(grid.shape), "summary": counts,
                      "cells": [c.to_dict() for c in grid.cells], "boundaries": bounds})


def _selected_entries(args) -> list:
    out = []
    for e in model_catalog():
        if args.model not in (None, "all") and e.id.family.value != args.model:
            continue
        if args.entropy and e.id.entropy.value != args.entropy:
            continue
        if args.ensemble and e.id.ensemble.value != args.ensemble:
            continue
        out.append(e)
    if not out:
        raise UsageError("no catalog model matches the selection")
    return out


def cmd_verify(args):
    if args.format == "csv":
        raise UsageError("verify writes JSON only")
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    assigned = parse_assignments(args.params)
    entries = _selected_entries(args)
    tol = args.tol if args.tol is not None else an.VERIFY_TOL
    if assigned and args.model == "all":
        raise UsageError("--params cannot be combined with --model all")
    reports = []
    for e in entries:
        params = dict(e.reference)
        params.update(assigned)
        bundle = make_model(e.id, params)
        reports.append(an.verify_model(bundle, args.samples, args.seed, tol))
    passed = all(r.passed for r in reports)
    text = dump_json({"schema": SCHEMA, "command": "verify", "samples": args.samples,
                      "seed": args.seed, "tol": tol, "passed": passed,
                      "reports": [r.to_dict() for r in reports]})
    return text, (0 if passed else EXIT_VERIFY)


def cmd_models(args) -> str:
    if args.format == "csv":
        raise UsageError("models writes JSON only")
    items = []
    for e in _selected_entries(args):
        b = make_model(e.id, dict(e.reference))
        items.append({
            "id": str(e.id), "family": e.id.family.value, "entropy": e.id.entropy.value,
            "ensemble": e.id.ensemble.value, "description": e.description,
            "representation": b.eq.representation.tag,
            "coordinates": list(b.eq.representation.coords), "inputs": list(e.inputs),
            "params": [{"name": s.name, "required": s.required, "default": s.default, "rule": s.rule}
                       for s in e.params],
            "reference_params": dict(e.reference), "figures": list(e.figures),
            "oracles": b.oracle_status,
            "default": DEFAULT_ENSEMBLE[(e.id.family.value, e.id.entropy.value)] == e.id.ensemble.value,
        })
    return dump_json({"schema": SCHEMA, "command": "models", "models": items})


HANDLERS = {"eval": cmd_eval, "scan": cmd_scan, "transitions": cmd_transitions,
            "stability": cmd_stability, "verify": cmd_verify, "models": cmd_models}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_with_config(argv))
        if args.command is None:
            raise UsageError("missing command (one of: " + ", ".join(COMMANDS) + ")")
        result = HANDLERS[args.command](args)
        text, code = result if isinstance(result, tuple) else (result, 0)
        _emit(text, args.out)
        return code
    except UsageError as exc:
        print(f"gtd: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParamError as exc:
        print(f"gtd: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"gtd: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except GTDError as exc:
        print(f"gtd: evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except OSError as exc:
        print(f"gtd: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
