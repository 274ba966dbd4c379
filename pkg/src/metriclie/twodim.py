"""Closed-form geometry and soliton equations for a two-dimensional derived algebra.

Decomposition-frame coordinates are ``(x_1, x_2, x_Gamma)`` for
``x = x_1 e_1 + x_2 e_2 + x_Gamma``. Brackets:

    [u, e1] = <a1, u> e1 + <a2, u> e2
    [u, e2] = <b1, u> e1 + <b2, u> e2
    [u, v]  = <f1(u), v> e1 + <f2(u), v> e2
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import numkit
from .decomp import DerivedDecomposition, Kind
from .errors import NonOrthonormalInput, NotNilpotent, WrongKind


def _require(d: DerivedDecomposition):
    if d.kind is not Kind.TWO_DIM:
        raise WrongKind("expected a decomposition with two-dimensional derived algebra")


def connection_2d(d: DerivedDecomposition, x, y) -> np.ndarray:
    _require(d)
    x = numkit.as_vec(x, d.n)
    y = numkit.as_vec(y, d.n)
    x1, x2, xu = x[0], x[1], x[2:]
    y1, y2, yu = y[0], y[1], y[2:]
    a1, a2, b1, b2, f1, f2 = d.a1, d.a2, d.b1, d.b2, d.f1, d.f2
    s = a2 + b1
    out = np.zeros(d.n)
    g = out[2:]  # view

    # rows with x = e_i
    g += x1 * y1 * a1 + 0.5 * (x1 * y2 + x2 * y1) * s + x2 * y2 * b2
    # nabla_{e1} u
    out[0] += -x1 * np.dot(a1, yu)
    out[1] += -0.5 * x1 * np.dot(s, yu)
    g += -0.5 * x1 * (f1 @ yu)
    # nabla_{e2} u
    out[1] += -x2 * np.dot(b2, yu)
    out[0] += -0.5 * x2 * np.dot(s, yu)
    g += -0.5 * x2 * (f2 @ yu)
    # nabla_v e1, nabla_v e2
    out[1] += 0.5 * y1 * np.dot(a2 - b1, xu)
    g += -0.5 * y1 * (f1 @ xu)
    out[0] += 0.5 * y2 * np.dot(b1 - a2, xu)
    g += -0.5 * y2 * (f2 @ xu)
    # nabla_v u
    out[0] += 0.5 * np.dot(f1 @ xu, yu)
    out[1] += 0.5 * np.dot(f2 @ xu, yu)
    return out


Plane = Sequence[Union[str, np.ndarray]]


def sectional_2d(d: DerivedDecomposition, plane: Plane, eps: float = numkit.EPS) -> float:
    """Sectional curvature of (e1, e2), (e_i, u) or (u, v) with u, v orthonormal in Gamma."""
    _require(d)
    p, q = plane
    if isinstance(q, str) and not isinstance(p, str):
        p, q = q, p
    a1, a2, b1, b2, f1, f2 = d.a1, d.a2, d.b1, d.b2, d.f1, d.f2
    if isinstance(p, str) and isinstance(q, str):
        if {p, q} != {"e1", "e2"}:
            raise NonOrthonormalInput(f"degenerate plane ({p}, {q})")
        s = a2 + b1
        return 0.25 * float(np.dot(s, s)) - float(np.dot(a1, b2))

    def unit(u):
        u = numkit.as_vec(u, d.gamma_dim)
        if abs(np.dot(u, u) - 1.0) > 1e3 * eps:
            raise NonOrthonormalInput("Gamma vectors must have unit length")
        return u

    if isinstance(p, str):
        u = unit(q)
        pa1, pa2, pb1, pb2 = (float(np.dot(w, u)) for w in (a1, a2, b1, b2))
        if p == "e1":
            fu = f1 @ u
            return 0.25 * (pb1 ** 2 - 3 * pa2 ** 2 + float(np.dot(fu, fu))) - pa1 ** 2 - 0.5 * pa2 * pb1
        if p == "e2":
            fu = f2 @ u
            return 0.25 * (pa2 ** 2 - 3 * pb1 ** 2 + float(np.dot(fu, fu))) - pb2 ** 2 - 0.5 * pa2 * pb1
        raise NonOrthonormalInput(f"unknown frame label {p!r}")
    u, v = unit(p), unit(q)
    if abs(np.dot(u, v)) > 1e3 * eps:
        raise NonOrthonormalInput("Gamma vectors must be orthogonal")
    return -0.75 * (float(np.dot(u, f1 @ v)) ** 2 + float(np.dot(u, f2 @ v)) ** 2)


@dataclass(frozen=True)
class RicciCoefficients:
    A1: float
    B1: float
    A2: float
    B2: float
    E1: np.ndarray
    E2: np.ndarray
    A_of: np.ndarray          # A(u) = <u, A_of>
    B_of: np.ndarray          # B(u) = <u, B_of>
    E_of: np.ndarray          # E(u) = E_of @ u
    B_of_literal: np.ndarray  # B(u) with f1(a1) in place of f1(b1)


def ricci_coefficients(d: DerivedDecomposition) -> RicciCoefficients:
    _require(d)
    a1, a2, b1, b2, f1, f2 = d.a1, d.a2, d.b1, d.b2, d.f1, d.f2
    tr = lambda m: float(np.trace(m)) if m.size else 0.0
    A1 = 0.5 * (b1 @ b1 - a2 @ a2) - 0.25 * tr(f1 @ f1) - a1 @ a1 - a1 @ b2
    B1 = -(a1 @ b1 + a2 @ b2 + 0.25 * tr(f1 @ f2))
    B2 = 0.5 * (a2 @ a2 - b1 @ b1) - 0.25 * tr(f2 @ f2) - b2 @ b2 - a1 @ b2
    E1 = -f1 @ (a1 + 0.5 * b2) - 0.5 * f2 @ a2
    E2 = -f2 @ (b2 + 0.5 * a1) - 0.5 * f1 @ b1
    s = b1 + a2
    E_of = (-np.outer(a1, a1) - np.outer(b2, b2) - 0.5 * np.outer(s, s)
            + 0.5 * (f1 @ f1 + f2 @ f2))
    literal = -(f2 @ (b2 + 0.5 * a1) + 0.5 * f1 @ a1)
    return RicciCoefficients(float(A1), float(B1), float(B1), float(B2), E1, E2,
                             E1.copy(), E2.copy(), E_of, literal)


@dataclass(frozen=True)
class Ricci2D:
    ric_e1: np.ndarray
    ric_e2: np.ndarray
    on_gamma: np.ndarray   # n x (n-2), column i = Ric(gamma_i)
    operator: np.ndarray   # full Ric in the decomposition frame


def ricci_2d(d: DerivedDecomposition, rc: Optional[RicciCoefficients] = None) -> Ricci2D:
    rc = ricci_coefficients(d) if rc is None else rc
    r1 = np.concatenate([[rc.A1, rc.B1], rc.E1])
    r2 = np.concatenate([[rc.A2, rc.B2], rc.E2])
    on_gamma = np.vstack([rc.A_of[None, :], rc.B_of[None, :], rc.E_of])
    return Ricci2D(r1, r2, on_gamma, np.column_stack([r1, r2, on_gamma]))


EQUATIONS = tuple(f"eq{i}" for i in range(1, 12))


def _instances(d: DerivedDecomposition, rc: RicciCoefficients, c: float) -> dict:
    """Signed values of every instance of eq1..eq11 at soliton constant ``c``.

    u and v range over the Gamma basis; vector equations contribute all
    their components.
    """
    a1, a2, b1, b2, f1, f2 = d.a1, d.a2, d.b1, d.b2, d.f1, d.f2
    m = d.gamma_dim
    A1, B1, B2 = rc.A1, rc.B1, rc.B2
    E1, E2 = rc.E1, rc.E2
    Ec = rc.E_of - c * np.eye(m)            # u -> E(u) - c u
    A_of, B_of = rc.A_of, rc.B_of
    F1 = f1.T                               # F1[u, v] = <f1(u), v>
    F2 = f2.T

    out = {
        "eq1": np.array([b1 @ E1 - a1 @ E2]),
        "eq2": np.array([b2 @ E1 - a2 @ E2]),
        "eq3": (np.outer(a1, E1) + np.outer(a2, E2)).ravel(),
        "eq4": (np.outer(b1, E1) + np.outer(b2, E2)).ravel(),
        "eq5": (F1[:, :, None] * E1 + F2[:, :, None] * E2).ravel(),
        "eq6": (a2 - b1) * B1 + f1 @ E1 - Ec.T @ a1,
        "eq7": (b1 - a2) * B1 + f2 @ E2 - Ec.T @ b2,
        "eq8": (B2 - A1) * a2 + B1 * (a1 - b2) + f2 @ E1 - Ec.T @ a2,
        "eq9": (B2 - A1) * b1 + B1 * (a1 - b2) - f1 @ E2 + Ec.T @ b1,
    }
    # <f_i(E(u) - c u), v> as [u, v]
    f1E = (f1 @ Ec).T
    f2E = (f2 @ Ec).T
    out["eq10"] = (F1 * (A1 - c) + F2 * B1 + np.outer(A_of, a1) + np.outer(B_of, b1) - f1E
                   - np.outer(a1, A_of) - np.outer(b1, B_of) + f1E.T).ravel()
    out["eq11"] = (F2 * (B2 - c) + F1 * B1 + np.outer(A_of, a2) + np.outer(B_of, b2) - f2E
                   - np.outer(a2, A_of) - np.outer(b2, B_of) + f2E.T).ravel()
    return out


def theorem32_residuals(d: DerivedDecomposition, c: float,
                        rc: Optional[RicciCoefficients] = None) -> dict:
    """Max |LHS| of each of eq1..eq11 over the Gamma basis."""
    _require(d)
    rc = ricci_coefficients(d) if rc is None else rc
    inst = _instances(d, rc, c)
    return {k: float(np.max(np.abs(v))) if v.size else 0.0 for k, v in inst.items()}


@dataclass(frozen=True)
class Theorem32Solution:
    c_candidates: tuple            # sorted distinct per-instance solutions
    per_equation: dict             # eqN -> sorted distinct candidates from that equation
    consistent: bool
    c: Optional[float]             # best c (least squares over c-dependent instances)
    residuals: dict                # residuals at c (or at 0 if no c)


def _distinct(values, eps):
    out = []
    for v in sorted(values):
        if not out or not numkit.close(v, out[-1], 1e3 * eps):
            out.append(v)
    return tuple(out)


def theorem32_solve(d: DerivedDecomposition, eps: float = numkit.EPS) -> Theorem32Solution:
    """Solve the affine-in-c equations instance by instance and test one common c."""
    _require(d)
    rc = ricci_coefficients(d)
    at0 = _instances(d, rc, 0.0)
    at1 = _instances(d, rc, 1.0)
    scale = max([1.0] + [float(np.max(np.abs(v))) for v in at0.values() if v.size]
                + [float(np.max(np.abs(at1[k] - at0[k]))) for k in at0 if at0[k].size])
    tol = eps * scale
    candidates, per_eq = [], {}
    alphas, betas = [], []
    for k in EQUATIONS:
        alpha, beta = at0[k], at1[k] - at0[k]
        live = np.abs(beta) > tol
        cs = list(-alpha[live] / beta[live])
        per_eq[k] = _distinct(cs, eps)
        candidates.extend(cs)
        alphas.append(alpha[live])
        betas.append(beta[live])
    al = np.concatenate(alphas)
    be = np.concatenate(betas)
    c = float(-np.dot(al, be) / np.dot(be, be)) if be.size else 0.0
    res = theorem32_residuals(d, c, rc)
    consistent = all(r <= tol * max(1.0, abs(c)) for r in res.values())
    return Theorem32Solution(_distinct(candidates, eps), per_eq, consistent, c, res)


@dataclass(frozen=True)
class CorollaryResidual:
    symmetrized: float
    literal: float


def _corollary_sides(d: DerivedDecomposition):
    f1, f2 = d.f1, d.f2
    S = f1 @ f1 + f2 @ f2
    t11 = 0.25 * np.trace(f1 @ f1)
    t22 = 0.25 * np.trace(f2 @ f2)
    t12 = 0.25 * np.trace(f1 @ f2)
    sym1 = t11 * f1 + t12 * f2 + 0.5 * f1 @ S + 0.5 * S @ f1
    sym2 = t22 * f2 + t12 * f1 + 0.5 * f2 @ S + 0.5 * S @ f2
    lit1 = t11 * f1 + t12 * f2 + 0.5 * f1 @ S + S @ f1
    lit2 = sym2
    return (sym1, sym2), (lit1, lit2)


def _nilpotent_gate(d: DerivedDecomposition, eps: float):
    _require(d)
    for name in ("a1", "a2", "b1", "b2"):
        if not numkit.is_zero(getattr(d, name), 1e3 * eps):
            raise NotNilpotent(f"{name} != 0: not 2-step nilpotent")


def corollary_nilpotent_check(d: DerivedDecomposition, c: float, eps: float = numkit.EPS) -> CorollaryResidual:
    """Residuals of c f_i = RHS_i for the symmetrized and the literal asymmetric forms."""
    _nilpotent_gate(d, eps)
    (s1, s2), (l1, l2) = _corollary_sides(d)
    f1, f2 = d.f1, d.f2
    mx = lambda *ms: max(float(np.max(np.abs(m))) if m.size else 0.0 for m in ms)
    return CorollaryResidual(mx(c * f1 - s1, c * f2 - s2), mx(c * f1 - l1, c * f2 - l2))


@dataclass(frozen=True)
class CorollarySolution:
    symmetrized: numkit.ScalarSolution
    literal: numkit.ScalarSolution


def corollary_solve(d: DerivedDecomposition, eps: float = numkit.EPS) -> CorollarySolution:
    _nilpotent_gate(d, eps)
    (s1, s2), (l1, l2) = _corollary_sides(d)
    f1, f2 = d.f1, d.f2
    scale = max(1.0, float(np.max(np.abs(np.concatenate([f1.ravel(), f2.ravel()])))) ** 3)
    sym = numkit.solve_for_scalar([(f1.ravel(), s1.ravel()), (f2.ravel(), s2.ravel())], eps * scale)
    lit = numkit.solve_for_scalar([(f1.ravel(), l1.ravel()), (f2.ravel(), l2.ravel())], eps * scale)
    return CorollarySolution(sym, lit)
