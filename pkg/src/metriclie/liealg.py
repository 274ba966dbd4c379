"""Lie algebras given by dense structure constants.

``C[i, j, k]`` is the coefficient of ``b_k`` in ``[b_i, b_j]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from . import numkit
from .errors import DimensionMismatch, NonFiniteValue


class LieAlgebra:
    """A real Lie algebra of dimension ``dim`` with an ordered basis."""

    def __init__(self, structure, labels: Optional[Sequence[str]] = None):
        C = np.asarray(structure, dtype=float)
        if C.ndim != 3 or not (C.shape[0] == C.shape[1] == C.shape[2]):
            raise DimensionMismatch(f"structure constants must be n x n x n, got {C.shape}")
        if not np.all(np.isfinite(C)):
            raise NonFiniteValue("structure constants have non-finite entries")
        self.dim = C.shape[0]
        self.C = numkit.frozen(C)
        if labels is None:
            labels = [f"X{i + 1}" for i in range(self.dim)]
        if len(labels) != self.dim:
            raise DimensionMismatch("label count does not match dimension")
        self.labels = tuple(labels)

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping[tuple[int, int], Sequence[float]],
                      labels: Optional[Sequence[str]] = None) -> "LieAlgebra":
        """Build from ``{(i, j): coeffs}`` with 0-based ``i < j``; completes antisymmetry."""
        C = np.zeros((dim, dim, dim))
        for (i, j), coeffs in brackets.items():
            if not (0 <= i < j < dim):
                raise DimensionMismatch(f"bracket index pair {(i, j)} must satisfy 0 <= i < j < {dim}")
            v = numkit.as_vec(coeffs, dim)
            C[i, j] = v
            C[j, i] = -v
        return cls(C, labels)

    @classmethod
    def abelian(cls, dim: int) -> "LieAlgebra":
        return cls(np.zeros((dim, dim, dim)))

    def bracket(self, x, y) -> np.ndarray:
        x = numkit.as_vec(x, self.dim)
        y = numkit.as_vec(y, self.dim)
        return np.einsum("i,j,ijk->k", x, y, self.C)

    def ad(self, x) -> np.ndarray:
        """Matrix of y -> [x, y]."""
        x = numkit.as_vec(x, self.dim)
        return np.einsum("i,ijk->kj", x, self.C)

    def change_basis(self, P, labels: Optional[Sequence[str]] = None) -> "LieAlgebra":
        """Structure constants in the basis given by the columns of the invertible ``P``."""
        P = numkit.as_mat(P, self.dim, self.dim)
        images = np.einsum("ai,bj,abk->ijk", P, P, self.C)
        Pinv = np.linalg.inv(P)
        return LieAlgebra(np.einsum("ijk,lk->ijl", images, Pinv), labels)

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, labels={list(self.labels)})"


@dataclass(frozen=True)
class ValidationReport:
    antisymmetry_residual: float
    jacobi_residual: float

    def passed(self, eps: float = numkit.EPS, scale: float = 1.0) -> bool:
        tol = eps * max(1.0, scale)
        return self.antisymmetry_residual <= tol and self.jacobi_residual <= tol


@dataclass(frozen=True)
class DerivedInfo:
    dim1: int
    basis1: tuple


def bracket(L: LieAlgebra, x, y) -> np.ndarray:
    return L.bracket(x, y)


def validate(L: LieAlgebra, eps: float = numkit.EPS) -> ValidationReport:
    C = L.C
    anti = float(np.max(np.abs(C + C.transpose(1, 0, 2)))) if C.size else 0.0
    # J[i,j,k] = [b_i,[b_j,b_k]] + [b_j,[b_k,b_i]] + [b_k,[b_i,b_j]]
    inner_ = np.einsum("jkm,imp->ijkp", C, C)
    jac = inner_ + inner_.transpose(1, 2, 0, 3) + inner_.transpose(2, 0, 1, 3)
    return ValidationReport(anti, float(np.max(np.abs(jac))) if jac.size else 0.0)


def jacobi_scale(L: LieAlgebra) -> float:
    """Magnitude of the Jacobi terms, for relative pass/fail decisions."""
    m = float(np.max(np.abs(L.C))) if L.C.size else 0.0
    return max(1.0, m * m * L.dim)


def derived_subalgebra(L: LieAlgebra, eps: float = numkit.EPS) -> DerivedInfo:
    n = L.dim
    images = L.C.reshape(n * n, n)
    if n == 0:
        return DerivedInfo(0, ())
    rows = numkit.row_echelon_basis(images, eps)
    if rows.shape[0] == 0:
        return DerivedInfo(0, ())
    basis = numkit.gram_schmidt(list(rows), None, eps)
    return DerivedInfo(len(basis), tuple(numkit.frozen(b) for b in basis))


@dataclass(frozen=True)
class DerivationCheck:
    passed: bool
    residual: float


def is_derivation(L: LieAlgebra, D, eps: float = numkit.EPS) -> DerivationCheck:
    n = L.dim
    D = numkit.as_mat(D, n, n)
    C = L.C
    # D[b_i,b_j], [D b_i, b_j], [b_i, D b_j] as (i, j, k) arrays
    d_br = np.einsum("ijm,km->ijk", C, D)
    br_d1 = np.einsum("mi,mjk->ijk", D, C)
    br_d2 = np.einsum("mj,imk->ijk", D, C)
    diff = d_br - br_d1 - br_d2
    residual = float(np.max(np.abs(diff))) if diff.size else 0.0
    scale = max(1.0, *(float(np.max(np.abs(t))) if t.size else 0.0 for t in (d_br, br_d1, br_d2)))
    return DerivationCheck(residual <= eps * scale, residual)
