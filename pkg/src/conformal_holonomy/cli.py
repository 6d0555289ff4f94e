"""Command line driver.

Usage::

    conformal-holonomy catalog
    conformal-holonomy analyze --algebra "so(3)+so(3)" --format json
    conformal-holonomy analyze --file algebra.json --report holonomy
    conformal-holonomy verify --algebra "so(3)"

Exit codes: 0 ok, 1 invalid input, 2 not a compact semisimple Lie algebra,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import (AlgebraFileError, ContractViolation, InputError, InvalidAlgebra,
                     NoConvergence, NotSemisimple)
from .lie_algebra import LISTED_NAMES, LieAlgebraSpec, catalog
from .pipeline import analyze

EXIT_OK, EXIT_INPUT, EXIT_ALGEBRA, EXIT_NUMERIC = 0, 1, 2, 3

SECTIONS = {
    "connection": ("frame", "lambda", "residuals"),
    "curvature": ("curvature",),
    "riemannian": ("riemannian",),
    "holonomy": ("holonomy", "riemannian_holonomy_dim"),
}


def parse_algebra_file(path) -> LieAlgebraSpec:
    """Read the structure-constants JSON format (0-based, ``i < j`` only)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise AlgebraFileError(f"{path}: cannot read file ({exc.strerror})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFileError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise AlgebraFileError(f"{path}: top level must be a JSON object")
    for key in ("name", "dim", "brackets"):
        if key not in doc:
            raise AlgebraFileError(f"{path}: missing field '{key}'")
    name, dim, brackets = doc["name"], doc["dim"], doc["brackets"]
    if not isinstance(name, str):
        raise AlgebraFileError(f"{path}: field 'name' must be a string")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise AlgebraFileError(f"{path}: field 'dim' must be a positive integer")
    if not isinstance(brackets, list):
        raise AlgebraFileError(f"{path}: field 'brackets' must be an array")

    def index(value, where):
        if isinstance(value, bool) or not isinstance(value, int):
            raise AlgebraFileError(f"{path}: {where} must be an integer")
        if not 0 <= value < dim:
            raise AlgebraFileError(f"{path}: {where} = {value} out of range for dim {dim}")
        return value

    c = np.zeros((dim, dim, dim))
    seen = set()
    for pos, entry in enumerate(brackets):
        where = f"brackets[{pos}]"
        if not isinstance(entry, dict) or not {"i", "j", "terms"} <= entry.keys():
            raise AlgebraFileError(f"{path}: {where} needs fields 'i', 'j', 'terms'")
        i = index(entry["i"], f"{where}.i")
        j = index(entry["j"], f"{where}.j")
        if i >= j:
            raise AlgebraFileError(f"{path}: {where} has i >= j ({i}, {j}); only i < j entries allowed")
        if (i, j) in seen:
            raise AlgebraFileError(f"{path}: {where} duplicates the pair ({i}, {j})")
        seen.add((i, j))
        if not isinstance(entry["terms"], list):
            raise AlgebraFileError(f"{path}: {where}.terms must be an array")
        for t, term in enumerate(entry["terms"]):
            tw = f"{where}.terms[{t}]"
            if not isinstance(term, dict) or not {"k", "c"} <= term.keys():
                raise AlgebraFileError(f"{path}: {tw} needs fields 'k' and 'c'")
            k = index(term["k"], f"{tw}.k")
            coef = term["c"]
            if isinstance(coef, bool) or not isinstance(coef, (int, float)) or not math.isfinite(coef):
                raise AlgebraFileError(f"{path}: {tw}.c must be a finite number")
            c[i, j, k] += coef
    return LieAlgebraSpec.from_upper(name, c)


def algebra_to_json(alg: LieAlgebraSpec) -> dict:
    """Inverse of :func:`parse_algebra_file` (zero coefficients omitted)."""
    brackets = []
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            terms = [{"k": int(k), "c": float(alg.structure[i, j, k])}
                     for k in np.flatnonzero(alg.structure[i, j])]
            if terms:
                brackets.append({"i": i, "j": j, "terms": terms})
    return {"name": alg.name, "dim": alg.dim, "brackets": brackets}


def _dumps(obj, indent=0):
    """JSON text with every float written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError("non-finite value in report")
        return format(float(obj), ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_dumps(v, indent + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _select(report_dict, which):
    if which == "all":
        return report_dict
    out = {"algebra": report_dict["algebra"]}
    for key in SECTIONS[which]:
        out[key] = report_dict[key]
    return out


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6e}" if v and (abs(v) < 1e-3 or abs(v) >= 1e4) else f"{v:.6g}"
    return str(v)


def render_text(d) -> str:
    lines = [f"algebra                  {d['algebra']['name']} (dim {d['algebra']['dim']})"]
    if "lambda" in d:
        lines.append(f"gamma_1 coefficient      {_fmt(d['lambda'])}")
    if "frame" in d:
        lines.append("frame theta")
        lines += ["    " + " ".join(f"{x: .6f}" for x in row) for row in d["frame"]]
    if "residuals" in d:
        lines.append("residuals")
        lines += [f"    {k:<21}{_fmt(v)}" for k, v in d["residuals"].items()]
    if "riemannian" in d:
        r = d["riemannian"]
        lines += ["riemannian",
                  f"    {'scal':<21}{_fmt(r['scal'])}",
                  f"    {'einstein_residual':<21}{_fmt(r['einstein_residual'])}",
                  f"    {'sectional_range':<21}[{_fmt(r['sectional_range'][0])}, {_fmt(r['sectional_range'][1])}]"]
    if "curvature" in d:
        lines.append("curvature")
        lines += [f"    {k:<21}{_fmt(v)}" for k, v in d["curvature"].items()]
    if "holonomy" in d:
        h = d["holonomy"]
        lines.append("conformal holonomy")
        lines += [f"    {k:<25}{_fmt(v)}" for k, v in h.items()]
    if "riemannian_holonomy_dim" in d:
        lines.append(f"riemannian holonomy dim  {d['riemannian_holonomy_dim']}")
    return "\n".join(lines)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="conformal-holonomy",
                     description="Normal conformal Cartan connection and conformal holonomy "
                                 "of bi-invariant metrics on compact semisimple Lie groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("catalog", help="list the named catalog algebras")
    for cmd, text in (("analyze", "run the pipeline and print a report"),
                      ("verify", "run the pipeline and check every residual")):
        p = sub.add_parser(cmd, help=text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--algebra", metavar="NAME", help='catalog name, e.g. "so(3)+so(3)"')
        src.add_argument("--file", metavar="PATH", help="structure-constants JSON file")
        p.add_argument("--tolerance", type=float, default=1e-9,
                       help="bound on every residual (scaled by the dimension)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--report", choices=("connection", "curvature", "riemannian", "holonomy", "all"),
                       default="all")
    return parser


def _verify_lines(d, failed):
    lines = [f"{'check':<22}{'value':<16}status"]
    for k, v in d["residuals"].items():
        lines.append(f"{k:<22}{_fmt(v):<16}{'FAIL' if k in failed else 'ok'}")
    extra = {"einstein": d["riemannian"]["einstein_residual"],
             "kappa_minus1": d["curvature"]["kappa_minus1_max"],
             "kappa1": d["curvature"]["kappa1_max"]}
    for k, v in extra.items():
        lines.append(f"{k:<22}{_fmt(v):<16}{'FAIL' if k in failed else 'ok'}")
    h = d["holonomy"]
    lines.append(f"{'holonomy_closed':<22}{str(h['closed_under_bracket']):<16}"
                 f"{'FAIL' if 'holonomy_closed' in failed else 'ok'}")
    lines.append(f"holonomy dim {h['algebra_dim']}, candidate {h['candidate_name'] or 'unnamed'}")
    return lines


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "catalog":
        print("\n".join(LISTED_NAMES))
        print("(any so(m) with m >= 3, su(m) with m >= 2, and '+'-separated sums are accepted)")
        return EXIT_OK
    try:
        alg = catalog(args.algebra) if args.algebra else parse_algebra_file(args.file)
        report = analyze(alg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvalidAlgebra, NotSemisimple) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ALGEBRA
    except (NoConvergence, ContractViolation, np.linalg.LinAlgError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    d = report.to_dict()
    failed = report.failed_residuals(args.tolerance)
    if args.command == "verify":
        lines = _verify_lines(d, failed)
        if args.format == "json":
            print(_dumps({"report": _select(d, args.report), "failed": failed}))
        else:
            print("\n".join(lines))
    else:
        out = _select(d, args.report)
        print(_dumps(out) if args.format == "json" else render_text(out))
    if failed:
        print(f"error: residuals above tolerance: {', '.join(failed)}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
