"""Algebraic Ricci soliton decision: Ric = c Id + D with D a derivation.

``oracle_solve`` works for any metric Lie algebra and never touches the
decomposition code. ``cross_validate`` runs it alongside the closed-form
criteria and lists every disagreement.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import decomp, geom, numkit, onedim, twodim
from .errors import MetricLieError
from .geom import MetricLieAlgebra
from .liealg import derived_subalgebra, is_derivation


class SolitonClass(enum.Enum):
    SHRINKING = "Shrinking"
    STEADY = "Steady"
    EXPANDING = "Expanding"


class Method(enum.Enum):
    ORACLE = "Oracle"
    THEOREM21 = "Theorem21"
    THEOREM21_CORRECTED = "Theorem21Corrected"
    THEOREM32 = "Theorem32"
    COROLLARY = "Corollary"
    COROLLARY_LITERAL = "CorollaryLiteral"


def classify(c: float, eps: float = numkit.EPS) -> SolitonClass:
    if c > eps:
        return SolitonClass.SHRINKING
    if c < -eps:
        return SolitonClass.EXPANDING
    return SolitonClass.STEADY


@dataclass(frozen=True)
class PairConstraint:
    """c * [b_i, b_j] = rhs for one basis pair, with its own best c."""

    pair: tuple
    lhs: np.ndarray
    rhs: np.ndarray
    candidate: Optional[float]
    off_axis: float   # |rhs - candidate * lhs|, > 0 means no c fits this pair alone


@dataclass(frozen=True)
class SolitonVerdict:
    is_soliton: bool
    method: Method
    c: Optional[float] = None
    soliton_class: Optional[SolitonClass] = None
    D: Optional[np.ndarray] = None            # basis coordinates
    derivation_residual: Optional[float] = None
    c_constraints: tuple = ()
    details: dict = field(default_factory=dict)

    def candidates(self, eps: float = numkit.EPS) -> list:
        """Distinct per-pair candidates that fit their own pair exactly."""
        out: list = []
        for pc in self.c_constraints:
            if pc.candidate is None or pc.off_axis > 1e3 * eps * max(1.0, abs(pc.candidate)):
                continue
            if not any(numkit.close(pc.candidate, v, 1e3 * eps) for v in out):
                out.append(pc.candidate)
        return sorted(out)


def _verdict(method, c, eps, **kw) -> SolitonVerdict:
    if c is None:
        return SolitonVerdict(False, method, **kw)
    return SolitonVerdict(True, method, c, classify(c, eps), **kw)


def oracle_solve(M: MetricLieAlgebra, eps: float = numkit.EPS) -> SolitonVerdict:
    """Decide Ric - c Id in Der(g) by solving the affine-in-c derivation law pairwise."""
    L = M.algebra
    n = M.dim
    Ric = geom.ricci_operator_basis(M)
    C = L.C
    constraints = []
    records = []
    for i in range(n):
        for j in range(i + 1, n):
            lhs = C[i, j]
            rhs = Ric[:, i] @ C[:, j] + C[i].T @ Ric[:, j] - Ric @ lhs
            if numkit.is_zero(lhs, eps):
                cand, off = None, float(np.max(np.abs(rhs)))
            else:
                cand = float(np.dot(lhs, rhs) / np.dot(lhs, lhs))
                off = float(np.max(np.abs(rhs - cand * lhs)))
            constraints.append((lhs, rhs))
            records.append(PairConstraint((i, j), np.array(lhs), rhs, cand, off))
    scale = max([1.0] + [float(np.max(np.abs(r))) for _, r in constraints]) if constraints else 1.0
    sol = numkit.solve_for_scalar(constraints, eps * scale) if constraints else \
        numkit.ScalarSolution(numkit.Solution.UNDERDETERMINED)
    details = {"solution_kind": sol.kind.value, "solver_residual": sol.residual}
    if sol.kind is numkit.Solution.INFEASIBLE:
        return SolitonVerdict(False, Method.ORACLE, c_constraints=tuple(records), details=details)
    c = 0.0 if sol.kind is numkit.Solution.UNDERDETERMINED else float(sol.c)
    D = Ric - c * np.eye(n)
    chk = is_derivation(L, D, eps * scale)
    if not chk.passed:
        details["rejected_c"] = c
        return SolitonVerdict(False, Method.ORACLE, derivation_residual=chk.residual,
                              c_constraints=tuple(records), details=details)
    return SolitonVerdict(True, Method.ORACLE, c, classify(c, eps), D, chk.residual,
                          tuple(records), details)


def frame_matrix(M: MetricLieAlgebra, A: np.ndarray) -> np.ndarray:
    """Express a basis-coordinate endomorphism in the orthonormal frame."""
    return M.frame_inv @ A @ M.frame


@dataclass(frozen=True)
class Discrepancy:
    method: str
    against: str
    field: str
    method_value: object
    against_value: object
    note: str = ""


@dataclass(frozen=True)
class CrossReport:
    derived_dim: int
    oracle: SolitonVerdict
    methods: dict                # Method.value -> SolitonVerdict
    discrepancies: tuple
    decomposition: Optional[decomp.DerivedDecomposition] = None
    extras: dict = field(default_factory=dict)


def theorem_verdicts(d: decomp.DerivedDecomposition, eps: float = numkit.EPS) -> tuple[dict, dict]:
    """Closed-form verdicts for a decomposition; returns (verdicts, extras)."""
    out, extras = {}, {}
    if d.kind is decomp.Kind.ONE_DIM:
        t = onedim.theorem21_classify(d, eps)
        extras["theorem21"] = t
        out[Method.THEOREM21] = _verdict(Method.THEOREM21, t.paper_c, eps,
                                          details={"case": t.paper_verdict.value, **t.details})
        out[Method.THEOREM21_CORRECTED] = _verdict(Method.THEOREM21_CORRECTED,
                                                    t.corrected_c if t.corrected_soliton else None, eps)
        return out, extras
    s = twodim.theorem32_solve(d, eps)
    extras["theorem32"] = s
    out[Method.THEOREM32] = _verdict(Method.THEOREM32, s.c if s.consistent else None, eps,
                                      details={"c_candidates": list(s.c_candidates)})
    try:
        cs = twodim.corollary_solve(d, eps)
    except MetricLieError:
        return out, extras
    extras["corollary"] = cs
    for method, sol in ((Method.COROLLARY, cs.symmetrized), (Method.COROLLARY_LITERAL, cs.literal)):
        c = None
        if sol.kind is numkit.Solution.UNIQUE:
            c = sol.c
        elif sol.kind is numkit.Solution.UNDERDETERMINED:
            c = 0.0
        out[method] = _verdict(method, c, eps, details={"solution_kind": sol.kind.value})
    return out, extras


def cross_validate(M: MetricLieAlgebra, eps: float = numkit.EPS,
                   oracle: Optional[SolitonVerdict] = None) -> CrossReport:
    """Run every applicable method; the oracle verdict is authoritative."""
    oracle = oracle_solve(M, eps) if oracle is None else oracle
    dim1 = derived_subalgebra(M.algebra, eps).dim1
    methods = {Method.ORACLE.value: oracle}
    discrepancies = []
    d = None
    extras = {}
    if dim1 in (1, 2):
        d = decomp.decompose(M, eps)
        verdicts, extras = theorem_verdicts(d, eps)
        for method, v in verdicts.items():
            methods[method.value] = v
            if v.is_soliton != oracle.is_soliton:
                discrepancies.append(Discrepancy(method.value, Method.ORACLE.value, "is_soliton",
                                                 v.is_soliton, oracle.is_soliton))
            elif v.is_soliton and not numkit.close(v.c, oracle.c, 1e-6):
                discrepancies.append(Discrepancy(method.value, Method.ORACLE.value, "c", v.c, oracle.c))
    return CrossReport(dim1, oracle, methods, tuple(discrepancies), d, extras)
