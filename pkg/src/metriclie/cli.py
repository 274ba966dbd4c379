"""Command-line front end.

Exit codes: 0 success (whatever the verdict), 1 invalid mathematics
(Jacobi or positive-definiteness failure, failing self-test), 2 usage,
parse or IO errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from . import catalog, numkit, properties, report
from .errors import (BadParameters, DimensionMismatch, MetricLieError, NotPositiveDefinite)
from .geom import MetricLieAlgebra
from .liealg import LieAlgebra, jacobi_scale, validate

EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    """Malformed input document (exit code 2)."""


class MathError(Exception):
    """Input parses but does not describe a metric Lie algebra (exit code 1)."""


# ---------------------------------------------------------------------------
# input documents
# ---------------------------------------------------------------------------

def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _scalar(x, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InputError(f"{what}: expected a number, got {x!r}")
    return float(x)


def _index(ref, names: list, what: str) -> int:
    """Resolve a basis reference: a name, or a 1-based integer index."""
    if isinstance(ref, bool):
        raise InputError(f"{what}: bad basis reference {ref!r}")
    if isinstance(ref, int):
        if not 1 <= ref <= len(names):
            raise InputError(f"{what}: index {ref} out of range 1..{len(names)}")
        return ref - 1
    if isinstance(ref, str) and ref in names:
        return names.index(ref)
    raise InputError(f"{what}: unknown basis element {ref!r}")


def parse_metric(raw, n: int, what: str = "metric") -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != n or any(not isinstance(r, list) or len(r) != n for r in raw):
        raise InputError(f"{what}: expected a {n}x{n} matrix")
    return np.array([[_scalar(x, what) for x in row] for row in raw])


def parse_document(doc) -> tuple[LieAlgebra, Optional[np.ndarray], Optional[float]]:
    if not isinstance(doc, dict):
        raise InputError("input must be a JSON object")
    n = doc.get("dim")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError("'dim' must be a positive integer")
    names = doc.get("basis")
    if names is None:
        names = [f"X{i + 1}" for i in range(n)]
    if not isinstance(names, list) or len(names) != n or not all(isinstance(s, str) for s in names) \
            or len(set(names)) != n:
        raise InputError(f"'basis' must list {n} distinct names")
    brackets = doc.get("brackets", [])
    if not isinstance(brackets, list):
        raise InputError("'brackets' must be a list")
    table: dict = {}
    for t, br in enumerate(brackets):
        what = f"brackets[{t}]"
        if not isinstance(br, dict) or not {"x", "y", "result"} <= set(br):
            raise InputError(f"{what}: needs keys x, y, result")
        i, j = _index(br["x"], names, what), _index(br["y"], names, what)
        if i >= j:
            raise InputError(f"{what}: brackets must be given with x before y in basis order")
        if (i, j) in table:
            raise InputError(f"{what}: bracket [{names[i]}, {names[j]}] given twice")
        if not isinstance(br["result"], dict):
            raise InputError(f"{what}: result must be an object")
        v = np.zeros(n)
        for ref, coeff in br["result"].items():
            k = _index(int(ref) if isinstance(ref, str) and ref.isdigit() else ref, names, what)
            v[k] += _scalar(coeff, what)
        table[(i, j)] = v
    metric = doc.get("metric")
    G = None if metric is None else parse_metric(metric, n)
    tol = doc.get("tolerance")
    tol = None if tol is None else _scalar(tol, "tolerance")
    if tol is not None and not tol > 0:
        raise InputError("tolerance must be positive")
    return LieAlgebra.from_brackets(n, table, names), G, tol


def build_metric_algebra(L: LieAlgebra, G, eps: float) -> MetricLieAlgebra:
    rep = validate(L)
    if not rep.passed(eps, jacobi_scale(L)):
        raise MathError(f"Jacobi identity fails (residual {rep.jacobi_residual:.3g})")
    try:
        return MetricLieAlgebra(L, G, eps)
    except NotPositiveDefinite as exc:
        raise MathError(f"metric is not positive definite: {exc}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _write(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _render(rep: dict, fmt: str) -> str:
    return report.to_markdown(rep) if fmt == "md" else report.to_json(rep)


def _emit_input(M: MetricLieAlgebra, path: Optional[str], eps: float):
    if path:
        _write(report.to_json(report.input_document(M, eps)), path)


def _override_metric(args, n: int):
    if not args.metric:
        return None
    raw = _read_json(args.metric)
    if isinstance(raw, dict):
        raw = raw.get("metric")
    return parse_metric(raw, n, args.metric)


def cmd_analyze(args) -> int:
    L, G, tol = parse_document(_read_json(args.path))
    eps = args.tolerance if args.tolerance is not None else (tol if tol is not None else numkit.EPS)
    G = _override_metric(args, L.dim) if args.metric else G
    M = build_metric_algebra(L, G, eps)
    rep = report.analyze(M, eps=eps, method=args.method, seed=args.seed, timing=args.timing)
    _emit_input(M, args.emit_input, eps)
    _write(_render(rep, args.format), args.output)
    return EXIT_OK


def _family_spec(args) -> catalog.FamilySpec:
    fam = args.family
    if fam not in catalog.FAMILIES:
        raise InputError(f"unknown family {fam!r}; choose from {', '.join(catalog.FAMILIES)}")
    if fam == "heisenberg":
        return catalog.heisenberg(args.m, args.abelian, args.lam)
    if fam == "affine":
        return catalog.affine(args.abelian)
    return {"indecomp5p2k": catalog.indecomp5p2k, "indecomp6p2k-type1": catalog.indecomp6p2k_type1,
            "indecomp6p2k-type2": catalog.indecomp6p2k_type2}[fam](args.k)


def cmd_catalog(args) -> int:
    spec = _family_spec(args)
    eps = args.tolerance if args.tolerance is not None else numkit.EPS
    try:
        L = catalog.algebra(spec)
    except BadParameters as exc:
        raise InputError(str(exc)) from exc
    G = _override_metric(args, L.dim)
    M = build_metric_algebra(L, G, eps)
    rep = report.analyze(M, eps=eps, method=args.method, seed=args.seed, timing=args.timing)
    if G is None:
        report.attach_reference_comparison(spec, rep)
    else:
        rep["family"] = spec.key
    _emit_input(M, args.emit_input, eps)
    _write(_render(rep, args.format), args.output)
    return EXIT_OK


def cmd_selftest(args) -> int:
    eps = args.tolerance if args.tolerance is not None else numkit.EPS
    bat = properties.run_battery(seed=args.seed, trials=args.trials, eps=eps)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.value:.3g} (limit {r.tolerance:.3g})"
             for r in bat.results]
    _write("\n".join(lines) + "\n", args.output)
    if bat.failures:
        sys.stderr.write("failing properties: " + ", ".join(r.name for r in bat.failures) + "\n")
        return EXIT_MATH
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _positive(s: str) -> float:
    x = float(s)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=_positive, default=None, help="hybrid tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0, help="seed for random samples")
    common.add_argument("--format", choices=("json", "md"), default="json")
    common.add_argument("--method", choices=report.METHOD_CHOICES, default="all")
    common.add_argument("--metric", metavar="FILE", help="JSON file holding a metric matrix")
    common.add_argument("--output", "-o", metavar="FILE", help="write the report here instead of stdout")
    common.add_argument("--emit-input", metavar="FILE", help="also write the algebra as an input document")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")

    p = argparse.ArgumentParser(prog="metriclie",
                                description="Curvature and Ricci soliton analysis of metric Lie algebras "
                                            "with one- or two-dimensional derived algebra.")
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="analyse an input document")
    a.add_argument("path")
    a.set_defaults(func=cmd_analyze)
    c = sub.add_parser("catalog", parents=[common], help="analyse a named family")
    c.add_argument("family", help=", ".join(catalog.FAMILIES))
    c.add_argument("--m", type=int, default=1, help="Heisenberg blocks")
    c.add_argument("--k", type=int, default=0, help="extra block index of the indecomposable families")
    c.add_argument("--abelian", type=int, default=0, help="abelian factor dimension")
    c.add_argument("--lam", type=float, default=1.0, help="Heisenberg block scale")
    c.set_defaults(func=cmd_catalog)
    s = sub.add_parser("selftest", parents=[common], help="run the seeded property battery")
    s.add_argument("--trials", type=int, default=200)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (MathError, NotPositiveDefinite) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_MATH
    except (DimensionMismatch, BadParameters) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except MetricLieError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
