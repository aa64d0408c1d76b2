"""Command-line front end.  Every run prints one JSON report on stdout.

Exit codes: 0 verdict holds, 1 verdict fails, 2 input or bounds error (a JSON
error object is written to stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import filtration, homology, invariants, pencil, ringmodel
from .pencil import KWBlock, KWForm, LinearForm, LinearFormMatrix
from .rational_core import as_rational, format_rational

SCHEMA = "kwkoszul.report/1"


class SchemaError(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"
        self.message = message


# ---------------------------------------------------------------------------
# Input


def _expect(cond: bool, pointer: str, message: str):
    if not cond:
        raise SchemaError(pointer, message)


def _rational(value, pointer: str) -> Fraction:
    try:
        return as_rational(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise SchemaError(pointer, f"not a rational number: {value!r} ({exc})") from None


def _parse_block(d: Any, ptr: str) -> KWBlock:
    _expect(isinstance(d, dict), ptr, "block must be an object")
    kind = d.get("kind")
    _expect(kind in ("nilpotent", "scroll", "jordan"), ptr + "/kind", "kind must be nilpotent, scroll or jordan")
    length = d.get("length")
    _expect(isinstance(length, int) and not isinstance(length, bool) and length >= 1, ptr + "/length",
            "length must be a positive integer")
    ev = None
    if kind == "jordan":
        _expect("eigenvalue" in d, ptr + "/eigenvalue", "jordan blocks need an eigenvalue")
        ev = _rational(d["eigenvalue"], ptr + "/eigenvalue")
    else:
        _expect("eigenvalue" not in d, ptr + "/eigenvalue", "only jordan blocks carry an eigenvalue")
    return KWBlock(kind, length, ev)


def _parse_matrix(d: dict) -> LinearFormMatrix:
    variables = d.get("variables")
    _expect(isinstance(variables, list) and variables and all(isinstance(v, str) for v in variables),
            "/variables", "variables must be a nonempty list of names")
    _expect(len(set(variables)) == len(variables), "/variables", "variable names must be distinct")
    rows = d.get("rows")
    _expect(isinstance(rows, list) and len(rows) == 2, "/rows", "rows must be a list of two rows")
    parsed = []
    for r, row in enumerate(rows):
        _expect(isinstance(row, list) and row, f"/rows/{r}", "row must be a nonempty list")
        _expect(len(row) == len(rows[0]), f"/rows/{r}", "rows must have equal length")
        out = []
        for c, entry in enumerate(row):
            ptr = f"/rows/{r}/{c}"
            _expect(isinstance(entry, dict), ptr, "entry must be an object {variable: coefficient}")
            for name, val in entry.items():
                _expect(name in variables, f"{ptr}/{name}", "unknown variable")
                _rational(val, f"{ptr}/{name}")
            out.append(LinearForm.from_mapping(variables, entry))
        parsed.append(tuple(out))
    return LinearFormMatrix(tuple(variables), tuple(parsed))


def parse_input(data: Any):
    """Return a LinearFormMatrix, a KWForm or a scroll type tuple."""
    _expect(isinstance(data, dict), "", "input must be a JSON object")
    kind = data.get("kind")
    if kind == "matrix":
        return _parse_matrix(data)
    if kind == "blocks":
        blocks = data.get("blocks")
        _expect(isinstance(blocks, list) and blocks, "/blocks", "blocks must be a nonempty list")
        free = data.get("free_variables", 0)
        _expect(isinstance(free, int) and free >= 0, "/free_variables", "must be a nonnegative integer")
        return KWForm(tuple(_parse_block(b, f"/blocks/{k}") for k, b in enumerate(blocks)), free)
    if kind == "scroll":
        t = data.get("type")
        _expect(isinstance(t, list) and t and all(isinstance(x, int) and not isinstance(x, bool) and x >= 1
                                                   for x in t), "/type", "type must be a list of positive integers")
        return tuple(sorted(t))
    raise SchemaError("/kind", "kind must be one of matrix, blocks, scroll")


def serialize_input(obj) -> dict:
    if isinstance(obj, LinearFormMatrix):
        return {"kind": "matrix", **obj.to_json()}
    if isinstance(obj, KWForm):
        return {"kind": "blocks", **obj.to_json()}
    return {"kind": "scroll", "type": list(obj)}


def as_matrix(obj) -> LinearFormMatrix:
    if isinstance(obj, LinearFormMatrix):
        return obj
    if isinstance(obj, KWForm):
        return pencil.blocks_to_matrix(obj)
    return pencil.scroll_matrix(obj)


def as_form(obj) -> KWForm:
    if isinstance(obj, KWForm):
        return obj
    if isinstance(obj, tuple):
        return KWForm(tuple(pencil.S(n) for n in obj))
    return pencil.normal_form_of_matrix(obj)[0]


def _parse_forms(raw: str, X: LinearFormMatrix) -> list[LinearForm]:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError("/forms", f"invalid JSON: {exc}") from None
    _expect(isinstance(data, list), "/forms", "forms must be a list")
    out = []
    for k, f in enumerate(data):
        if isinstance(f, str):
            f = {f: 1}
        _expect(isinstance(f, dict), f"/forms/{k}", "form must be a variable name or {variable: coefficient}")
        for name, val in f.items():
            _expect(name in X.variables, f"/forms/{k}/{name}", "unknown variable")
            _rational(val, f"/forms/{k}/{name}")
        out.append(LinearForm.from_mapping(X.variables, f))
    return out


# ---------------------------------------------------------------------------
# Commands


def _form_json(F: KWForm) -> dict:
    d = F.to_json()
    d["text"] = str(F)
    return d


def cmd_normal_form(obj, args, bounds):
    X = as_matrix(obj)
    P = pencil.matrix_to_pencil(X)
    F, cert = pencil.kw_normal_form(P)
    ok = pencil.verify_certificate(P, F, cert)
    return {"normal_form": _form_json(F), "certificate": cert.to_json(), "certificate_verified": ok}, \
        {"ok": ok, "checked_to_degree": None}


def cmd_section(obj, args, bounds):
    X = as_matrix(obj)
    forms = _parse_forms(args.forms or "[]", X)
    Y = pencil.section(X, forms)
    P = pencil.matrix_to_pencil(Y)
    F, cert = pencil.kw_normal_form(P)
    ok = pencil.verify_certificate(P, F, cert)
    return {"section": Y.to_json(), "normal_form": _form_json(F), "certificate": cert.to_json(),
            "certificate_verified": ok}, {"ok": ok, "checked_to_degree": None}


def cmd_analyze(obj, args, bounds):
    F = as_form(obj)
    L = invariants.LengthSequence.of(F)
    corr = invariants.hilbert_correction(L)
    koszul = invariants.koszul_verdict(L)
    return {"normal_form": _form_json(F),
            "length_sequence": {"nilpotent": list(L.nilpotent), "scroll": list(L.scroll),
                                "jordan": [{"eigenvalue": format_rational(l), "lengths": list(ps)} for l, ps in L.jordan]},
            "koszul": koszul, "regularity": invariants.regularity_formula(L),
            "correction": invariants.format_correction(corr),
            "correction_coefficients": [format_rational(c) for c in corr.coeffs]}, \
        {"ok": koszul, "checked_to_degree": None}


def _hf_table(F: KWForm, D: int) -> list[dict]:
    full = ringmodel.two_minors(pencil.blocks_to_matrix(F))
    rest = F.without_nilpotent()
    if rest.blocks:
        part = ringmodel.two_minors(pencil.blocks_to_matrix(rest))
        hp = [ringmodel.hilbert_function(part.ring, part, d) for d in range(D + 1)]
    else:
        hp = [1] + [0] * D
    corr = invariants.hilbert_correction(F)
    rows = []
    for d in range(D + 1):
        h = ringmodel.hilbert_function(full.ring, full, d)
        c = corr.coeffs[d] if d < len(corr.coeffs) else 0
        rows.append({"degree": d, "hilbert": h, "hilbert_without_nilpotent": hp[d],
                     "oracle_difference": h - hp[d], "formula": int(c), "ok": h - hp[d] == c})
    return rows


def cmd_hilbert(obj, args, bounds):
    F = as_form(obj)
    rows = _hf_table(F, args.max_degree)
    ok = all(r["ok"] for r in rows)
    return {"normal_form": _form_json(F), "table": rows}, {"ok": ok, "checked_to_degree": args.max_degree}


def cmd_filtration(obj, args, bounds):
    F = as_form(obj)
    report = filtration.verify_koszul_filtration(F, args.max_degree)
    out = report.to_json()
    return {"normal_form": _form_json(F), **out}, out["verdict"]


def cmd_groebner(obj, args, bounds):
    F = as_form(obj)
    X = pencil.blocks_to_matrix(F)
    v = ringmodel.groebner_check_degreewise(X, ringmodel.scroll_term_order(F), args.max_degree)
    return {"normal_form": _form_json(F), "term_order": list(X.variables), "detail": v.detail}, v.to_json()


def cmd_classify(obj, args, bounds):
    if not isinstance(obj, tuple):
        raise SchemaError("/kind", "classify needs a scroll type")
    c = invariants.classify_scroll(obj)
    return c.to_json(), {"ok": True, "checked_to_degree": None}


def cmd_homology(obj, args, bounds):
    if args.m is None or args.n is None:
        raise SchemaError("/", "homology-witness needs --m and --n")
    kw = {k: bounds[k] for k in ("max_degree", "max_vertices") if k in bounds}
    r = homology.witness_report(args.m, args.n, **kw)
    return r.to_json(), {"ok": r.witness, "checked_to_degree": None}


def cmd_betti(obj, args, bounds):
    X = as_matrix(obj)
    G = ringmodel.two_minors(X)
    jmax = bounds.get("jmax", min(args.max_degree + 1, 6))
    imax = bounds.get("imax", 3)
    kw = {"nmax": bounds.get("nmax", 6), "degmax": bounds.get("degmax", 6)}
    table = ringmodel.quotient_res_betti(G.ring, G, imax, jmax, **kw)
    nonlinear = sorted(f"{i},{j}" for (i, j) in table if j > i)
    return {"betti": {f"{i},{j}": b for (i, j), b in sorted(table.items())}, "nonlinear": nonlinear,
            "imax": imax, "jmax": jmax}, {"ok": not nonlinear, "checked_to_degree": jmax}


COMMANDS = {
    "normal-form": cmd_normal_form,
    "section": cmd_section,
    "analyze": cmd_analyze,
    "hilbert": cmd_hilbert,
    "filtration": cmd_filtration,
    "groebner-check": cmd_groebner,
    "classify": cmd_classify,
    "homology-witness": cmd_homology,
    "betti": cmd_betti,
}
NO_INPUT = {"homology-witness"}


def _parse_bounds(items) -> dict[str, int]:
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise SchemaError("/bounds", f"expected key=value, got {item!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise SchemaError(f"/bounds/{key}", "bound must be an integer") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kwkoszul", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("action", nargs="?", help="for 'filtration': verify")
    p.add_argument("--input", help="path to a JSON input file")
    p.add_argument("--inline", help="JSON input given directly")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--bounds", action="append", metavar="KEY=VALUE")
    p.add_argument("--forms", help="JSON list of linear forms for 'section'")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    return p


def _load(args):
    if args.inline is not None:
        raw = args.inline
    elif args.input is not None:
        raw = Path(args.input).read_text(encoding="utf-8")
    else:
        raise SchemaError("/", "give --input or --inline")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError("/", f"invalid JSON: {exc}") from None
    return data


def run(argv: list[str] | None = None) -> tuple[int, dict | None, dict | None]:
    """Execute one job; return (exit code, report, error)."""
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        if args.max_degree < 1:
            raise SchemaError("/max-degree", "max-degree must be at least 1")
        if args.command == "filtration" and args.action not in (None, "verify"):
            raise SchemaError("/action", "filtration supports only 'verify'")
        bounds = _parse_bounds(args.bounds)
        obj = None
        inputs: dict = {}
        if args.command not in NO_INPUT:
            obj = parse_input(_load(args))
            inputs = serialize_input(obj)
        else:
            inputs = {"m": args.m, "n": args.n}
        if args.forms:
            inputs["forms"] = json.loads(args.forms)
        results, verdict = COMMANDS[args.command](obj, args, bounds)
    except SchemaError as exc:
        return 2, None, {"error": {"type": "SchemaError", "pointer": exc.pointer, "message": exc.message}}
    except (pencil.PencilError, filtration.FiltrationError, ringmodel.BoundsExceeded, homology.BoundsExceeded,
            ringmodel.HasNilpotentBlock, ValueError, ZeroDivisionError) as exc:
        return 2, None, {"error": {"type": type(exc).__name__, "message": str(exc)}}
    report = {
        "schema": SCHEMA,
        "subcommand": args.command + (" verify" if args.command == "filtration" else ""),
        "inputs": inputs,
        "max_degree": args.max_degree,
        "bounds": bounds,
        "results": results,
        "verdict": verdict,
        "timing": {"seconds": round(time.perf_counter() - start, 6)},
    }
    return (0 if verdict.get("ok") else 1), report, None


def main(argv: list[str] | None = None) -> int:
    code, report, error = run(argv)
    if error is not None:
        print(json.dumps(error), file=sys.stderr)
        return code
    text = json.dumps(report, indent=2, sort_keys=False)
    args = build_parser().parse_args(argv)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
