"""Closed-form geometry for a one-dimensional derived algebra.

Brackets in the decomposition frame: ``[u, e] = <a, u> e`` and
``[u, v] = <f(u), v> e`` for u, v in Gamma. Vectors passed to
``connection_1d`` use decomposition-frame coordinates ``(x_e, x_Gamma)``;
``sectional_1d`` takes Gamma coordinates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import numkit
from .decomp import DerivedDecomposition, Kind
from .errors import NonOrthonormalInput, WrongKind


def _require(d: DerivedDecomposition):
    if d.kind is not Kind.ONE_DIM:
        raise WrongKind("expected a decomposition with one-dimensional derived algebra")


def _split(d: DerivedDecomposition, x):
    x = numkit.as_vec(x, d.n)
    return x[0], x[1:]


def connection_1d(d: DerivedDecomposition, x, y) -> np.ndarray:
    _require(d)
    xe, xu = _split(d, x)
    ye, yu = _split(d, y)
    a, f = d.a, d.f
    e_part = -xe * np.dot(yu, a) + 0.5 * np.dot(f @ xu, yu)
    g_part = xe * ye * a - 0.5 * xe * (f @ yu) - 0.5 * ye * (f @ xu)
    return np.concatenate([[e_part], g_part])


def _check_orthonormal(vecs, eps):
    for i, u in enumerate(vecs):
        if abs(np.dot(u, u) - 1.0) > 1e3 * eps:
            raise NonOrthonormalInput("input vectors must have unit length")
        for w in vecs[i + 1:]:
            if abs(np.dot(u, w)) > 1e3 * eps:
                raise NonOrthonormalInput("input vectors must be orthogonal")


def sectional_1d(d: DerivedDecomposition, u, v=None, eps: float = numkit.EPS) -> float:
    """K(u, e) when ``v`` is None, else K(u, v); u, v orthonormal in Gamma."""
    _require(d)
    u = numkit.as_vec(u, d.gamma_dim)
    if v is None:
        _check_orthonormal([u], eps)
        fu = d.f @ u
        return 0.25 * float(np.dot(fu, fu)) - float(np.dot(d.a, u)) ** 2
    v = numkit.as_vec(v, d.gamma_dim)
    _check_orthonormal([u, v], eps)
    return -0.75 * float(np.dot(d.f @ u, v)) ** 2


@dataclass(frozen=True)
class Ricci1D:
    ric_e: np.ndarray        # Ric(e), frame coordinates
    on_gamma: np.ndarray     # n x (n-1): column i is Ric(gamma_i), frame coordinates
    operator: np.ndarray     # full Ric in the decomposition frame


def ricci_1d(d: DerivedDecomposition) -> Ricci1D:
    _require(d)
    a, f = d.a, d.f
    m = d.gamma_dim
    ric_e = np.concatenate([[-(0.25 * np.trace(f @ f) + np.dot(a, a))], -f @ a])
    # Ric(u) = 1/2 f^2 u - <u, a> a + <f u, a> e
    g_block = 0.5 * f @ f - np.outer(a, a)
    e_row = (f.T @ a) if m else np.zeros(0)
    on_gamma = np.vstack([e_row[None, :], g_block])
    op = np.column_stack([ric_e, on_gamma])
    return Ricci1D(ric_e, on_gamma, op)


class Verdict1D(enum.Enum):
    CASE_I = "CaseI"
    CASE_II = "CaseII"
    NONE = "None"


@dataclass(frozen=True)
class Theorem21Result:
    paper_verdict: Verdict1D
    paper_c: Optional[float]
    corrected_soliton: bool
    corrected_c: Optional[float]
    details: dict = field(default_factory=dict)

    @property
    def paper_soliton(self) -> bool:
        return self.paper_verdict is not Verdict1D.NONE


def _cubic_residual(f: np.ndarray, kappa: float) -> float:
    r = f @ f @ f - kappa * f
    return float(np.max(np.abs(r))) if r.size else 0.0


def theorem21_classify(d: DerivedDecomposition, eps: float = numkit.EPS) -> Theorem21Result:
    """Soliton test for one-dimensional derived algebras, literal and corrected.

    The literal unimodular branch demands c = 0. The corrected branch asks
    only for some c with f^3 = (c - tr(f^2)/4) f, which is what the
    derivation equations give when a = 0.
    """
    _require(d)
    a, f = d.a, d.f
    quarter_tr = 0.25 * float(np.trace(f @ f)) if f.size else 0.0
    a2 = float(np.dot(a, a))
    scale = max(1.0, float(np.max(np.abs(f))) ** 3 if f.size else 1.0, a2)
    tol = eps * scale
    unimodular = np.sqrt(a2) <= eps
    details = {"a_norm_sq": a2, "quarter_trace_f2": quarter_tr, "unimodular": bool(unimodular)}

    if unimodular:
        res_i = _cubic_residual(f, -quarter_tr)
        details["case_i_residual"] = res_i
        literal = Verdict1D.CASE_I if res_i <= tol else Verdict1D.NONE
        literal_c = 0.0 if literal is Verdict1D.CASE_I else None
        if f.size == 0 or numkit.is_zero(f, eps):
            corr_ok, corr_c = True, 0.0
        else:
            f3 = f @ f @ f
            sol = numkit.solve_for_scalar([(f.ravel(), f3.ravel())], eps * scale)
            corr_ok = sol.kind is numkit.Solution.UNIQUE
            corr_c = sol.c + quarter_tr if corr_ok else None
            details["corrected_kappa"] = sol.c
            details["corrected_residual"] = sol.residual
        return Theorem21Result(literal, literal_c, corr_ok, corr_c, details)

    fa = f @ a
    res_ker = float(np.max(np.abs(fa))) if fa.size else 0.0
    res_ii = _cubic_residual(f, -(2 * a2 + quarter_tr))
    details.update(f_of_a_residual=res_ker, case_ii_residual=res_ii)
    ok = res_ker <= tol and res_ii <= tol
    literal = Verdict1D.CASE_II if ok else Verdict1D.NONE
    c = -a2 if ok else None
    return Theorem21Result(literal, c, ok, c, details)
