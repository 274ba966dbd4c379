"""Analysis pipeline and report rendering (JSON and Markdown).

Reports are plain dicts with a fixed key order. ``to_json`` renders floats
with 17 significant digits so that output is byte-stable and round-trips
doubles exactly.
"""

from __future__ import annotations

import math
import time
from typing import Optional

import numpy as np

from . import catalog, decomp, geom, numkit, onedim, soliton, twodim
from .errors import NoExpectationsForFamily, NonFiniteValue
from .geom import MetricLieAlgebra
from .liealg import LieAlgebra, derived_subalgebra, jacobi_scale, validate

SCHEMA = 1
METHOD_CHOICES = ("oracle", "theorem", "all")


# ---------------------------------------------------------------------------
# formatting helpers
# ---------------------------------------------------------------------------

def _num(x) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise NonFiniteValue(f"non-finite value {x!r} in report")
    return x + 0.0  # folds -0.0 into 0.0


def _vec(v) -> list:
    return [_num(x) for x in np.ravel(v)]


def _mat(A) -> list:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    return [_vec(row) for row in A] if A.size else []


def _opt(x):
    return None if x is None else _num(x)


def coeff_text(x: float) -> str:
    fr = catalog.pretty_fraction(x)
    return fr if fr is not None else f"{x:.6g}"


def vector_text(v, labels, eps: float = 1e-12) -> str:
    """Render a coordinate vector as a signed combination of labels, e.g. "-1/2 e2 - 1/2 X4"."""
    parts = []
    for x, lab in zip(np.ravel(v), labels):
        if abs(x) <= eps:
            continue
        mag = coeff_text(abs(x))
        term = lab if mag == "1" else f"{mag} {lab}"
        if not parts:
            parts.append(term if x > 0 else f"-{term}")
        else:
            parts.append(("+ " if x > 0 else "- ") + term)
    return " ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

def _frame_for_report(M: MetricLieAlgebra, d: Optional[decomp.DerivedDecomposition]):
    """Orthonormal frame (columns, basis coordinates) and labels used across the report."""
    if d is not None:
        return np.asarray(d.frame), list(d.labels)
    return np.asarray(M.frame), [f"f{i + 1}" for i in range(M.dim)]


def _validation(L: LieAlgebra) -> dict:
    rep = validate(L)
    return {
        "antisymmetry_residual": _num(rep.antisymmetry_residual),
        "jacobi_residual": _num(rep.jacobi_residual),
        "jacobi_scale": _num(jacobi_scale(L)),
    }


def _decomposition(d: decomp.DerivedDecomposition, eps: float) -> dict:
    gl = list(d.labels[d.d:])
    tr = lambda A: _num(np.trace(A)) if A.size else 0.0
    w = decomp.unimodularity_witness(d, eps)
    out = {"kind": d.kind.value, "labels": list(d.labels), "frame": _mat(d.frame)}
    if d.kind is decomp.Kind.ONE_DIM:
        out["invariants"] = {
            "a": _vec(d.a), "a_text": vector_text(d.a, gl),
            "f": _mat(d.f), "tr(f^2)": tr(d.f @ d.f),
        }
    else:
        out["invariants"] = {
            "a1": _vec(d.a1), "a1_text": vector_text(d.a1, gl),
            "a2": _vec(d.a2), "a2_text": vector_text(d.a2, gl),
            "b1": _vec(d.b1), "b1_text": vector_text(d.b1, gl),
            "b2": _vec(d.b2), "b2_text": vector_text(d.b2, gl),
            "f1": _mat(d.f1), "f2": _mat(d.f2),
            "tr(f1^2)": tr(d.f1 @ d.f1), "tr(f2^2)": tr(d.f2 @ d.f2), "tr(f1 f2)": tr(d.f1 @ d.f2),
            "a2_b1_parallel_defect": _num(decomp.parallel_defect(d.a2, d.b1)),
        }
    out["unimodular"] = bool(w.unimodular)
    out["mean_curvature"] = _vec(w.witness)
    out["mean_curvature_text"] = vector_text(w.witness, gl)
    return out


def _connection(M: MetricLieAlgebra, P: np.ndarray, labels: list) -> dict:
    n = M.dim
    Pinv = P.T @ M.metric
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            v = Pinv @ geom.nabla(M, P[:, i], P[:, j])
            row.append({"vector": _vec(v), "text": vector_text(v, labels)})
        rows.append(row)
    return {"convention": "rows[i][j] = nabla_{row i} (column j)", "labels": labels, "rows": rows}


def _sectional(M: MetricLieAlgebra, d, P, labels, rng, samples: int) -> dict:
    n = M.dim
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for i, j in pairs:
        generic = geom.sectional(M, P[:, i], P[:, j])
        entry = {"plane": [labels[i], labels[j]], "generic": _num(generic)}
        if d is not None:
            closed = _closed_sectional(d, np.eye(n)[i], np.eye(n)[j])
            entry["closed_form"] = _num(closed)
            entry["difference"] = _num(abs(closed - generic))
        out.append(entry)
    rand = []
    if d is not None and d.gamma_dim >= 2:
        for _ in range(samples):
            Q = numkit.random_orthogonal(rng, d.gamma_dim)
            u, v = Q[:, 0], Q[:, 1]
            generic = geom.sectional(M, d.gamma_to_basis(u), d.gamma_to_basis(v))
            closed = _closed_sectional(d, d.lift(u), d.lift(v))
            rand.append({"u": _vec(u), "v": _vec(v), "generic": _num(generic),
                         "closed_form": _num(closed), "difference": _num(abs(closed - generic))})
    return {"frame_planes": out, "random_gamma_planes": rand}


def _closed_sectional(d, x, y) -> float:
    """Closed-form sectional curvature for frame-coordinate vectors x, y (frame vectors or Gamma vectors)."""
    k = d.d
    names = ["e"] if k == 1 else ["e1", "e2"]

    def item(z):
        hit = [i for i in range(k) if abs(z[i]) > 0]
        return names[hit[0]] if hit else z[k:]

    p, q = item(x), item(y)
    if k == 1:
        if isinstance(p, str):
            return onedim.sectional_1d(d, q)
        if isinstance(q, str):
            return onedim.sectional_1d(d, p)
        return onedim.sectional_1d(d, p, q)
    return twodim.sectional_2d(d, (p, q))


def _ricci(M: MetricLieAlgebra, d, P, labels) -> dict:
    Pinv = P.T @ M.metric
    tf = geom.ricci_trace_formula(M)
    ct = geom.ricci_contraction(M)
    A = Pinv @ geom.ricci_operator_basis(M, tf) @ P
    B = Pinv @ geom.ricci_operator_basis(M, ct) @ P
    out = {
        "labels": labels,
        "trace_formula": _mat(A),
        "contraction": _mat(B),
        "max_disagreement": _num(np.max(np.abs(A - B))),
        "scalar_curvature": _num(tf.scalar_curv),
        "columns_text": {labels[j]: vector_text(A[:, j], labels) for j in range(M.dim)},
    }
    if d is not None:
        closed = onedim.ricci_1d(d).operator if d.d == 1 else twodim.ricci_2d(d).operator
        out["closed_form"] = _mat(closed)
        out["closed_form_disagreement"] = _num(np.max(np.abs(closed - A)))
    return out


def _verdict_dict(v: soliton.SolitonVerdict, eps: float) -> dict:
    out = {
        "is_soliton": bool(v.is_soliton),
        "c": _opt(v.c),
        "class": v.soliton_class.value if v.soliton_class else None,
    }
    if v.method is soliton.Method.ORACLE:
        out["solution_kind"] = v.details.get("solution_kind")
        out["candidates"] = _vec(v.candidates(eps))
        out["derivation_residual"] = _opt(v.derivation_residual)
        out["D"] = None if v.D is None else _mat(v.D)
    else:
        extra = {}
        for k, val in sorted(v.details.items()):
            if isinstance(val, (bool, str)) or val is None:
                extra[k] = val
            elif isinstance(val, (int, float, np.floating)):
                extra[k] = _num(val)
            elif isinstance(val, (list, tuple)):
                extra[k] = _vec(val)
        out["details"] = extra
    return out


def _discrepancy_dict(x: soliton.Discrepancy) -> dict:
    conv = lambda v: v if isinstance(v, (bool, str)) or v is None else _num(v)
    return {"source": x.method, "against": x.against, "field": x.field,
            "source_value": conv(x.method_value), "against_value": conv(x.against_value),
            "note": x.note}


def analyze(M: MetricLieAlgebra, eps: float = numkit.EPS, method: str = "all", seed: int = 0,
            samples: int = 3, timing: bool = False) -> dict:
    """Full pipeline: validate, decompose, geometry, soliton methods, discrepancies."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    L = M.algebra
    info = derived_subalgebra(L, eps)
    d = decomp.decompose(M, eps) if info.dim1 in (1, 2) else None
    P, labels = _frame_for_report(M, d)
    rep = {
        "schema": SCHEMA,
        "input": {"dim": M.dim, "basis": list(L.labels), "metric": _mat(M.metric)},
        "settings": {"tolerance": _num(eps), "method": method, "seed": int(seed)},
        "validation": _validation(L),
        "derived": {"dim": info.dim1, "basis": _mat(info.basis1) if info.dim1 else []},
        "decomposition": _decomposition(d, eps) if d is not None else None,
        "connection": _connection(M, P, labels),
        "sectional": _sectional(M, d, P, labels, rng, samples),
        "ricci": _ricci(M, d, P, labels),
    }
    methods, discrepancies = {}, []
    if method in ("oracle", "all"):
        oracle = soliton.oracle_solve(M, eps)
        methods[soliton.Method.ORACLE.value] = oracle
    if d is not None and method == "theorem":
        for m, v in soliton.theorem_verdicts(d, eps)[0].items():
            methods[m.value] = v
    if method == "all":
        cr = soliton.cross_validate(M, eps, oracle)
        methods = dict(cr.methods)
        discrepancies = [_discrepancy_dict(x) for x in cr.discrepancies]
    rep["soliton"] = {name: _verdict_dict(v, eps) for name, v in methods.items()}
    if d is not None and d.kind is decomp.Kind.TWO_DIM and method != "oracle":
        s = twodim.theorem32_solve(d, eps)
        rep["theorem32"] = {
            "per_equation": {k: _vec(v) for k, v in s.per_equation.items()},
            "best_c": _opt(s.c),
            "residuals_at_best_c": {k: _num(v) for k, v in s.residuals.items()},
        }
    rep["discrepancies"] = discrepancies
    if timing:
        rep["timing"] = {"seconds": _num(time.perf_counter() - t0)}
    return rep


# ---------------------------------------------------------------------------
# reference values for the catalog
# ---------------------------------------------------------------------------

def _computed_value(key: str, rep: dict):
    dec = rep.get("decomposition") or {}
    inv = dec.get("invariants", {})
    ric = rep["ricci"]
    labels = ric["labels"]
    if key in ("a1", "a2"):
        return inv.get(f"{key}_text")
    if key.startswith("tr("):
        return inv.get(key)
    if key.startswith("Ric(") and "." in key:
        col, comp = key[4:].split(").")
        return ric["trace_formula"][labels.index(comp)][labels.index(col)]
    if key.startswith("Ric("):
        col = key[4:-1]
        return ric["columns_text"][col]
    if key == "E2":
        j = labels.index("e2")
        col = np.array([row[j] for row in ric["trace_formula"]])
        col[:2] = 0.0
        return vector_text(col, labels)
    if key.startswith("c from "):
        eq = key.split()[-1]
        return (rep.get("theorem32") or {}).get("per_equation", {}).get(eq)
    if key == "is_soliton":
        return rep["soliton"]["Oracle"]["is_soliton"]
    return None


def _agrees(expected, computed) -> bool:
    if computed is None:
        return False
    if isinstance(expected, bool) or isinstance(computed, bool):
        return expected == computed
    if isinstance(expected, str):
        return expected == computed
    if isinstance(computed, str):
        return computed == "0" and float(expected) == 0.0
    if isinstance(computed, list):
        return len(computed) == 1 and numkit.close(float(expected), computed[0], 1e-9)
    return numkit.close(float(expected), float(computed), 1e-9)


def reference_comparison(spec: catalog.FamilySpec, rep: dict) -> list:
    try:
        exp = catalog.expected(spec)
    except NoExpectationsForFamily:
        return []
    rows = []
    for e in exp:
        comp = _computed_value(e.key, rep)
        ref = e.value if isinstance(e.value, (bool, str)) else _num(e.value)
        rows.append({"key": e.key, "reference": ref, "computed": comp, "agree": _agrees(e.value, comp),
                     "disputed": e.disputed, "citation": e.citation, "note": e.note})
    return rows


def attach_reference_comparison(spec: catalog.FamilySpec, rep: dict) -> dict:
    """Add the reference-vs-computed table; every disagreement also becomes a discrepancy entry."""
    rows = reference_comparison(spec, rep)
    for r in rows:
        if not r["agree"]:
            rep["discrepancies"].append({
                "source": "computed", "against": f"reference: {r['citation']}", "field": r["key"],
                "source_value": r["computed"], "against_value": r["reference"], "note": r["note"]})
    rep["family"] = spec.key
    rep["reference_comparison"] = rows
    return rep


def analyze_catalog(spec: catalog.FamilySpec, **kw) -> dict:
    return attach_reference_comparison(spec, analyze(catalog.build(spec), **kw))


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------

def _emit(obj, indent: int, level: int, out: list):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format(_num(obj), ".17g"))
    elif isinstance(obj, str):
        import json
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for k, (key, val) in enumerate(items):
            out.append(f'{pad}"{key}": ')
            _emit(val, indent, level + 1, out)
            out.append(",\n" if k < len(items) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        if all(isinstance(x, (int, float, np.integer, np.floating)) and not isinstance(x, bool) for x in obj):
            parts: list = []
            for x in obj:
                _emit(x, indent, level + 1, parts)
                parts.append(", ")
            out.append("[" + "".join(parts[:-1]) + "]")
            return
        out.append("[\n")
        for k, val in enumerate(obj):
            out.append(pad)
            _emit(val, indent, level + 1, out)
            out.append(",\n" if k < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_json(obj, indent: int = 2) -> str:
    out: list = []
    _emit(obj, indent, 0, out)
    return "".join(out) + "\n"


def _md_table(header, rows) -> list:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    return lines


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, str):
        return x
    if isinstance(x, list):
        return ", ".join(_fmt(v) for v in x) if x else "none"
    return coeff_text(float(x))


def to_markdown(rep: dict) -> str:
    L = []
    title = rep.get("family") or f"metric Lie algebra of dimension {rep['input']['dim']}"
    L.append(f"# Analysis: {title}")
    L.append("")
    v = rep["validation"]
    L.append(f"Jacobi residual {v['jacobi_residual']:.3g}, antisymmetry residual "
             f"{v['antisymmetry_residual']:.3g}. Derived algebra dimension {rep['derived']['dim']}.")
    dec = rep.get("decomposition")
    if dec:
        L += ["", "## Decomposition", "", f"Kind: {dec['kind']}. Frame labels: {', '.join(dec['labels'])}.", ""]
        rows = [[k[:-5] if k.endswith("_text") else k, _fmt(val)]
                for k, val in dec["invariants"].items() if not isinstance(val, list)]
        rows.append(["H", dec["mean_curvature_text"]])
        L += _md_table(["invariant", "value"], rows)
    con = rep["connection"]
    labs = con["labels"]
    L += ["", "## Levi-Civita connection", "", "Row x, column y: nabla_x y.", ""]
    L += _md_table(["nabla"] + labs, [[labs[i]] + [c["text"] for c in row] for i, row in enumerate(con["rows"])])
    L += ["", "## Sectional curvature", ""]
    sec = rep["sectional"]["frame_planes"]
    has_closed = bool(sec) and "closed_form" in sec[0]
    hdr = ["plane", "generic"] + (["closed form"] if has_closed else [])
    L += _md_table(hdr, [[f"K({s['plane'][0]}, {s['plane'][1]})", _fmt(s["generic"])]
                         + ([_fmt(s["closed_form"])] if has_closed else []) for s in sec])
    ric = rep["ricci"]
    L += ["", "## Ricci curvature", ""]
    L += _md_table(["x", "Ric(x)"], [[k, t] for k, t in ric["columns_text"].items()])
    L += ["", f"Trace formula vs contraction: max disagreement {ric['max_disagreement']:.3g}. "
              f"Scalar curvature {_fmt(ric['scalar_curvature'])}."]
    L += ["", "## Soliton verdicts", ""]
    rows = []
    for name, sv in rep["soliton"].items():
        rows.append([name, _fmt(sv["is_soliton"]), _fmt(sv["c"]), sv["class"] or "-",
                     _fmt(sv.get("candidates")) if "candidates" in sv else "-"])
    L += _md_table(["method", "soliton", "c", "class", "per-pair candidates"], rows)
    if rep.get("theorem32"):
        L += ["", "Per-equation c values:", ""]
        L += _md_table(["equation", "c candidates"],
                       [[k, _fmt(vals)] for k, vals in rep["theorem32"]["per_equation"].items()])
    L += ["", "## Discrepancies", ""]
    if rep["discrepancies"]:
        L += _md_table(["source", "against", "field", "source value", "against value"],
                       [[x["source"], x["against"], x["field"], _fmt(x["source_value"]), _fmt(x["against_value"])]
                        for x in rep["discrepancies"]])
    else:
        L.append("none")
    if rep.get("reference_comparison"):
        L += ["", "## Reference values vs computed", ""]
        L += _md_table(["key", "reference", "computed", "agree", "disputed"],
                       [[r["key"], _fmt(r["reference"]), _fmt(r["computed"]), _fmt(r["agree"]), _fmt(r["disputed"])]
                        for r in rep["reference_comparison"]])
    return "\n".join(L) + "\n"


def input_document(M: MetricLieAlgebra, eps: Optional[float] = None) -> dict:
    """The InputDocument form of ``M``: 1-based indices, brackets listed for x < y."""
    L = M.algebra
    brackets = []
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            res = {L.labels[k]: _num(L.C[i, j, k]) for k in range(L.dim) if L.C[i, j, k] != 0.0}
            if res:
                brackets.append({"x": L.labels[i], "y": L.labels[j], "result": res})
    doc = {"dim": L.dim, "basis": list(L.labels), "brackets": brackets, "metric": _mat(M.metric)}
    if eps is not None:
        doc["tolerance"] = _num(eps)
    return doc
