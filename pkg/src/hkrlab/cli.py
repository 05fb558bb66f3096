"""Command-line front end.

    hkrlab <subcommand> --algebra FILE [--max-degree N] [--max-weight W]
                        [--jobs N] [--format json|markdown]

Exit status: 0 when every check passes, 1 when a mathematical mismatch is
reported, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .cotangent import NotCompleteIntersection, derived_hkr_check, kaehler_consistency
from .derham import DeRhamAlgebra, derham_cohomology_dim
from .exact_linear import LinearAlgebraError
from .graded_algebra import AlgebraError, GradedAlgebra, Presentation
from .hochschild import HochschildChains, b_compatibility_suite, hkr_check, hochschild_mixed
from .mixed_complex import derham_mixed, ext_ku_table, negative_cyclic_dim, periodic_dim, stable_degree
from .parsing import ParseError, parse_poly, to_poly

DEFAULT_MAX_DEGREE = 4
DEFAULT_MAX_WEIGHT = 6
COMMANDS = ("hh", "derham", "hkr-check", "derived-hkr-check", "cyclic", "ext-ku", "b-suite")


class InputError(Exception):
    def __init__(self, kind: str, message: str, **details):
        super().__init__(message)
        self.kind = kind
        self.details = details


# --- input documents ---------------------------------------------------------------------

def load_document(text: str) -> Dict[str, Any]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("InvalidDocument", f"not valid JSON: {exc.msg}", offset=exc.pos) from exc
    if not isinstance(doc, dict):
        raise InputError("InvalidDocument", "top level must be an object")
    gens = doc.get("generators")
    if not isinstance(gens, list) or not all(isinstance(g, dict) for g in gens):
        raise InputError("InvalidDocument", "'generators' must be a list of {name, weight} objects")
    rels = doc.get("relations", [])
    if not isinstance(rels, list) or not all(isinstance(r, str) for r in rels):
        raise InputError("InvalidDocument", "'relations' must be a list of strings")
    caps = doc.get("caps", {})
    if not isinstance(caps, dict):
        raise InputError("InvalidDocument", "'caps' must be an object")
    return doc


def presentation_from_document(doc: Dict[str, Any]) -> Presentation:
    try:
        gens = tuple((str(g["name"]), g["weight"]) for g in doc["generators"])
    except KeyError as exc:
        raise InputError("InvalidDocument", f"generator entry missing {exc.args[0]!r}") from exc
    names = [n for n, _ in gens]
    rels = []
    for k, src in enumerate(doc.get("relations", [])):
        try:
            rels.append(to_poly(parse_poly(src, names), names))
        except ParseError as exc:
            raise InputError(type(exc).__name__, str(exc), relation=k,
                             offset=getattr(exc, "offset", None)) from exc
    try:
        return Presentation(gens, tuple(rels))
    except AlgebraError as exc:
        raise InputError(type(exc).__name__, str(exc)) from exc


def algebra_from_document(doc: Dict[str, Any]) -> GradedAlgebra:
    return GradedAlgebra(presentation_from_document(doc))


def _algebra_record(doc: Dict[str, Any], A: GradedAlgebra) -> Dict[str, Any]:
    return {
        "generators": [{"name": n, "weight": w} for n, w in A.presentation.generators],
        "relations": list(doc.get("relations", [])),
        "description": A.presentation.describe(),
    }


def _frac(x: Optional[Fraction]):
    if x is None:
        return None
    return str(x) if x.denominator != 1 else x.numerator


# --- per-weight workers (also used in-process) ------------------------------------------

_STATE: Dict[str, Any] = {}


def _worker_init(doc_json: str) -> None:
    doc = json.loads(doc_json)
    A = algebra_from_document(doc)
    _STATE.clear()
    _STATE.update(A=A, H=HochschildChains(A), D=DeRhamAlgebra(A))


def _hh_column(w: int, n_max: int) -> List[int]:
    H = _STATE["H"]
    return [H.hh_dim(n, w) for n in range(n_max + 1)]


def _derham_column(w: int, n_max: int) -> List[int]:
    D = _STATE["D"]
    return [derham_cohomology_dim(D, p, w) for p in range(n_max + 1)]


def _cyclic_column(w: int, variant: str, degrees: Sequence[int]) -> Dict[str, Any]:
    HM = hochschild_mixed(_STATE["H"])
    DM = derham_mixed(_STATE["D"])
    out: Dict[str, Any] = {"hochschild": {}, "derham": {}}
    if variant == "negative":
        for d in degrees:
            out["hochschild"][d] = negative_cyclic_dim(HM, d, w)
            out["derham"][d] = negative_cyclic_dim(DM, d, w)
    else:
        for par in ("even", "odd"):
            out["hochschild"][par] = periodic_dim(HM, par, w)
            out["derham"][par] = periodic_dim(DM, par, w)
            # stabilization of the negative cyclic side
            out.setdefault("stable_hochschild", {})[par] = negative_cyclic_dim(HM, stable_degree(HM, par, w), w)
            out.setdefault("stable_derham", {})[par] = negative_cyclic_dim(DM, stable_degree(DM, par, w), w)
    return out


def _map_weights(doc: Dict[str, Any], jobs: int, fn, W: int, *args) -> List[Any]:
    doc_json = json.dumps(doc, sort_keys=True)
    if jobs <= 1 or W < 1:
        _worker_init(doc_json)
        return [fn(w, *args) for w in range(W + 1)]
    with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init, initargs=(doc_json,)) as pool:
        return list(pool.map(fn, range(W + 1), *([a] * (W + 1) for a in args)))


# --- commands --------------------------------------------------------------------------------

def cmd_hh(doc, A, n_max, W, jobs, opts) -> Dict[str, Any]:
    cols = _map_weights(doc, jobs, _hh_column, W, n_max)
    table = {str(n): {str(w): cols[w][n] for w in range(W + 1)} for n in range(n_max + 1)}
    return {"tables": {"hh_dim": table}, "findings": [], "status": 0}


def cmd_derham(doc, A, n_max, W, jobs, opts) -> Dict[str, Any]:
    cols = _map_weights(doc, jobs, _derham_column, W, n_max)
    table = {str(p): {str(w): cols[w][p] for w in range(W + 1)} for p in range(n_max + 1)}
    return {"tables": {"derham_cohomology_dim": table}, "findings": [], "status": 0}


def cmd_hkr_check(doc, A, n_max, W, jobs, opts) -> Dict[str, Any]:
    rep = hkr_check(A, n_max, W)
    table = {f"{r.n},{r.w}": {
        "omega_dim": r.omega_dim, "hh_dim": r.hh_dim, "dims_match": r.dims_match,
        "lands_in_cycles": r.lands_in_cycles, "induced_rank": r.induced_rank,
        "isomorphism": r.isomorphism, "multiplicative": r.multiplicative,
        "multiplicative_up_to_boundary": r.multiplicative_up_to_boundary,
    } for r in rep.rows}
    findings = [{"check": "hkr", "n": r.n, "w": r.w, "passed": r.ok} for r in rep.failures()]
    findings.insert(0, {"check": "hkr", "passed": rep.ok, "cells": len(rep.rows)})
    return {"tables": {"hkr": table}, "findings": findings, "status": 0 if rep.ok else 1}


def cmd_derived_hkr_check(doc, A, n_max, W, jobs, opts) -> Dict[str, Any]:
    rep = derived_hkr_check(A, n_max, W, override=opts.override)
    table = {f"{r.n},{r.w}": {"hh_dim": r.hh_dim, "sym_total": r.sym_total,
                              "sym_by_p": {str(p): d for p, d in r.sym_dims.items()}}
             for r in rep.rows}
    kc = kaehler_consistency(A, W)
    findings = [{"check": "derived-hkr", "passed": rep.ok, "scope": rep.scope, "override": rep.override}]
    findings += [{"check": "derived-hkr", "n": r.n, "w": r.w, "passed": False} for r in rep.failures()]
    kc_ok = all(h0 == om for _, h0, om in kc)
    findings.append({"check": "H0(L) = Omega^1", "passed": kc_ok})
    return {"tables": {"derived_hkr": table,
                       "h0_vs_kaehler": {str(w): {"h0": h0, "omega1": om} for w, h0, om in kc}},
            "findings": findings, "status": 0 if rep.ok and kc_ok else 1}


def cmd_cyclic(doc, A, n_max, W, jobs, opts) -> Dict[str, Any]:
    variant = opts.variant
    degrees = list(range(n_max, -n_max - 1, -1))
    cols = _map_weights(doc, jobs, _cyclic_column, W, variant, degrees)
    findings = []
    ok = True
    if variant == "negative":
        table = {str(d): {str(w): {"hochschild": cols[w]["hochschild"][d], "derham": cols[w]["derham"][d]}
                          for w in range(W + 1)} for d in degrees}
        agree = all(cols[w]["hochschild"][0] == cols[w]["derham"][0] for w in range(W + 1))
        findings.append({"check": "degree-0 negative cyclic: hochschild == derham", "passed": agree,
                         "note": "expected for smooth algebras"})
        ok = agree
    else:
        table = {par: {str(w): {"hochschild": cols[w]["hochschild"][par], "derham": cols[w]["derham"][par]}
                       for w in range(W + 1)} for par in ("even", "odd")}
        for side in ("hochschild", "derham"):
            stable = all(cols[w][side][par] == cols[w]["stable_" + side][par]
                         for w in range(W + 1) for par in ("even", "odd"))
            findings.append({"check": f"periodic == stabilized negative cyclic ({side})", "passed": stable})
            ok = ok and stable
    return {"tables": {f"cyclic_{variant}": table}, "findings": findings, "status": 0 if ok else 1}


def cmd_ext_ku(opts) -> Dict[str, Any]:
    d_max = opts.max
    table = ext_ku_table(d_max)
    expected = {d: int(d <= 0 and d % 2 == 0) for d in table}
    ok = table == expected
    return {"tables": {"ext_ku": {str(d): v for d, v in table.items()}},
            "findings": [{"check": "polynomial ring on a degree -2 class", "passed": ok}],
            "status": 0 if ok else 1}


def cmd_b_suite(doc, A, n_max, W, jobs, opts) -> Dict[str, Any]:
    rep = b_compatibility_suite(A, n_max, W)
    witnesses = [{"u": {"degree": w.u[0], "weight": w.u[1], "chain": w.u[2]},
                  "v": {"degree": w.v[0], "weight": w.v[1], "chain": w.v[2]},
                  "defect": w.defect} for w in rep.defect_witnesses]
    H = HochschildChains(A)
    solved = []
    for bw in rep.boundary_witnesses[:5]:
        solved.append({"degree": bw.degree, "weight": bw.weight,
                       "defect": H.render(bw.degree, bw.weight, bw.defect),
                       "primitive": None if bw.primitive is None else H.render(bw.degree + 1, bw.weight, bw.primitive)})
    findings = [
        {"check": "chain-level Leibniz defect of B", "passed": rep.defect_found, "witnesses": witnesses},
        {"check": "defects of cycle pairs are boundaries", "passed": rep.all_defects_bound,
         "pairs_tested": len(rep.boundary_witnesses), "examples": solved},
        {"check": "B hkr = lambda_n hkr d on homology", "passed": all(rep.lambda_consistent.values()),
         "lambda": {str(n): _frac(v) for n, v in rep.lambdas.items()}},
    ]
    return {"tables": {"lambda": {str(n): _frac(v) for n, v in rep.lambdas.items()}},
            "findings": findings, "status": 0 if rep.ok else 1}


HANDLERS = {
    "hh": cmd_hh,
    "derham": cmd_derham,
    "hkr-check": cmd_hkr_check,
    "derived-hkr-check": cmd_derived_hkr_check,
    "cyclic": cmd_cyclic,
    "b-suite": cmd_b_suite,
}


# --- rendering -----------------------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, dict):
        return " / ".join(f"{k}={_cell(x)}" for k, x in v.items())
    return str(v)


def render_markdown(result: Dict[str, Any]) -> str:
    lines = [f"# {result['command']}"]
    if result.get("algebra"):
        lines.append(f"algebra: `{result['algebra']['description']}`")
    lines.append(f"caps: {result['caps']}")
    for name, table in result["tables"].items():
        lines.append("")
        lines.append(f"## {name}")
        rows = list(table)
        first = table[rows[0]] if rows else None
        if isinstance(first, dict) and all(isinstance(table[r], dict) for r in rows) \
                and all(list(table[r]) == list(first) for r in rows):
            cols = list(first)
            lines.append("| | " + " | ".join(cols) + " |")
            lines.append("|---" * (len(cols) + 1) + "|")
            for r in rows:
                lines.append(f"| {r} | " + " | ".join(_cell(table[r][c]) for c in cols) + " |")
        else:
            lines.append("| key | value |")
            lines.append("|---|---|")
            for r in rows:
                lines.append(f"| {r} | {_cell(table[r])} |")
    lines.append("")
    lines.append("## findings")
    for f in result["findings"]:
        mark = "PASS" if f.get("passed") else "FAIL"
        lines.append(f"- [{mark}] {f['check']}")
    return "\n".join(lines) + "\n"


# --- entry point ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hkrlab", description="Hochschild, cyclic and de Rham computations over Q.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name == "ext-ku":
            p.add_argument("--max", type=int, default=10, help="largest |total degree| to tabulate")
        else:
            p.add_argument("--algebra", required=True, help="JSON presentation document")
            p.add_argument("--max-degree", type=int, default=None)
            p.add_argument("--max-weight", type=int, default=None)
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
        p.add_argument("--format", choices=("json", "markdown"), default="json")
        if name == "cyclic":
            p.add_argument("--variant", choices=("negative", "periodic"), default="negative")
        if name == "derived-hkr-check":
            p.add_argument("--override", action="store_true",
                           help="run even if the complete-intersection test fails")
    return ap


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        opts = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if opts.command == "ext-ku":
            if opts.max < 0:
                raise InputError("InvalidArgument", "--max must be non-negative")
            caps = {"max_total_degree": opts.max}
            body = cmd_ext_ku(opts)
            algebra = None
        else:
            try:
                with open(opts.algebra, encoding="utf-8") as fh:
                    doc = load_document(fh.read())
            except OSError as exc:
                raise InputError("FileError", str(exc)) from exc
            A = algebra_from_document(doc)
            file_caps = doc.get("caps", {})
            n_max = opts.max_degree if opts.max_degree is not None else file_caps.get("max_degree", DEFAULT_MAX_DEGREE)
            W = opts.max_weight if opts.max_weight is not None else file_caps.get("max_weight", DEFAULT_MAX_WEIGHT)
            if not isinstance(n_max, int) or not isinstance(W, int) or n_max < 0 or W < 0:
                raise InputError("InvalidArgument", "caps must be non-negative integers")
            caps = {"max_degree": n_max, "max_weight": W}
            algebra = _algebra_record(doc, A)
            body = HANDLERS[opts.command](doc, A, n_max, W, max(1, opts.jobs), opts)
    except InputError as exc:
        _emit_error(stdout, stderr, exc.kind, str(exc), exc.details)
        return 2
    except NotCompleteIntersection as exc:
        _emit_error(stdout, stderr, "NotCompleteIntersection", str(exc), {})
        return 2
    except (AlgebraError, LinearAlgebraError) as exc:
        _emit_error(stdout, stderr, type(exc).__name__, str(exc), {})
        return 2

    result = {"version": __version__, "command": opts.command, "algebra": algebra, "caps": caps,
              "tables": body["tables"], "findings": body["findings"]}
    if opts.format == "markdown":
        stdout.write(render_markdown(result))
    else:
        stdout.write(json.dumps(result, indent=2, sort_keys=True) + "\n")
    return body["status"]


def _emit_error(stdout, stderr, kind: str, message: str, details: Dict[str, Any]) -> None:
    record = {"error": {"kind": kind, "message": message, **{k: v for k, v in details.items() if v is not None}}}
    stdout.write(json.dumps(record, sort_keys=True) + "\n")
    stderr.write(f"hkrlab: {kind}: {message}\n")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
