"""Left-invariant Riemannian geometry of a metric Lie algebra.

Vector arguments and results of ``nabla``, ``curvature``, ``ad_star`` and
``j_map`` use coordinates in the algebra's own basis. Ricci data is reported
in the orthonormal frame obtained by Gram-Schmidt of that basis under the
metric, in basis order.

Sign convention: ``R(x, y) = [nabla_x, nabla_y] - nabla_[x, y]`` and
``ric(x, y) = sum_i <R(f_i, x) y, f_i>``, so the centre of the Heisenberg
algebra has positive Ricci curvature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import numkit
from .errors import DegeneratePlane, DimensionMismatch, NotPositiveDefinite
from .liealg import LieAlgebra


class MetricLieAlgebra:
    """A Lie algebra with a positive definite inner product ``metric``."""

    def __init__(self, algebra: LieAlgebra, metric=None, eps: float = numkit.EPS):
        n = algebra.dim
        G = np.eye(n) if metric is None else numkit.as_mat(metric, n, n)
        why = numkit.spd_failure(G, eps)
        if why is not None:
            raise NotPositiveDefinite(why)
        self.algebra = algebra
        self.dim = n
        self.metric = numkit.frozen(0.5 * (G + G.T))
        frame = numkit.gram_schmidt(list(np.eye(n)), self.metric, eps) if n else []
        self.frame = numkit.frozen(np.array(frame).T if n else np.zeros((0, 0)))
        # G-orthonormal, so the inverse is F^T G
        self.frame_inv = numkit.frozen(self.frame.T @ self.metric)
        self.frame_algebra = algebra.change_basis(self.frame) if n else algebra

    @property
    def labels(self):
        return self.algebra.labels

    def scaled(self, t: float) -> "MetricLieAlgebra":
        return MetricLieAlgebra(self.algebra, t * self.metric)

    def change_basis(self, P) -> "MetricLieAlgebra":
        """Same metric Lie algebra expressed in the basis given by the columns of ``P``."""
        P = numkit.as_mat(P, self.dim, self.dim)
        return MetricLieAlgebra(self.algebra.change_basis(P), P.T @ self.metric @ P)

    def to_frame(self, x) -> np.ndarray:
        return self.frame_inv @ numkit.as_vec(x, self.dim)

    def from_frame(self, v) -> np.ndarray:
        return self.frame @ numkit.as_vec(v, self.dim)

    def inner(self, x, y) -> float:
        return numkit.inner(x, y, self.metric)

    def __repr__(self) -> str:
        return f"MetricLieAlgebra(dim={self.dim})"


@dataclass(frozen=True)
class RicciData:
    """Ricci curvature in the orthonormal frame ``frame`` (columns, basis coordinates)."""

    ric_form: np.ndarray
    ric_operator: np.ndarray
    scalar_curv: float
    frame: np.ndarray
    mean_curvature: np.ndarray = field(default=None)

    def operator_in_basis(self) -> np.ndarray:
        """Ric as a matrix acting on basis coordinates."""
        return self.frame @ self.ric_operator @ np.linalg.inv(self.frame)


def _check(M: MetricLieAlgebra, *vecs):
    for v in vecs:
        if np.shape(v) != (M.dim,):
            raise DimensionMismatch(f"expected vectors of length {M.dim}, got shape {np.shape(v)}")
    return [numkit.as_vec(v) for v in vecs]


def ad_star(M: MetricLieAlgebra, x) -> np.ndarray:
    (x,) = _check(M, x)
    G = M.metric
    return np.linalg.solve(G, M.algebra.ad(x).T @ G)


def nabla(M: MetricLieAlgebra, x, y) -> np.ndarray:
    """Levi-Civita derivative of the left-invariant field y along x."""
    x, y = _check(M, x, y)
    return 0.5 * (M.algebra.bracket(x, y) - ad_star(M, x) @ y - ad_star(M, y) @ x)


def curvature(M: MetricLieAlgebra, x, y, z) -> np.ndarray:
    x, y, z = _check(M, x, y, z)
    return (nabla(M, x, nabla(M, y, z)) - nabla(M, y, nabla(M, x, z))
            - nabla(M, M.algebra.bracket(x, y), z))


def sectional(M: MetricLieAlgebra, x, y, eps: float = numkit.EPS) -> float:
    x, y = _check(M, x, y)
    xx, yy, xy = M.inner(x, x), M.inner(y, y), M.inner(x, y)
    denom = xx * yy - xy * xy
    if denom <= eps * max(1.0, xx * yy):
        raise DegeneratePlane("vectors do not span a plane")
    return M.inner(curvature(M, x, y, y), x) / denom


def j_map(M: MetricLieAlgebra, x) -> np.ndarray:
    """Matrix of y -> ad_star(y) x."""
    (x,) = _check(M, x)
    return np.column_stack([ad_star(M, e) @ x for e in np.eye(M.dim)])


def mean_curvature_vector(M: MetricLieAlgebra) -> np.ndarray:
    """H with <H, x> = tr ad(x), in basis coordinates."""
    traces = np.einsum("ikk->i", M.algebra.C)
    return np.linalg.solve(M.metric, traces)


# Frame-level tensors. All of these take the orthonormal-frame structure
# constants c[i, j, k] = <[f_i, f_j], f_k>.

def connection_coefficients(c: np.ndarray) -> np.ndarray:
    """Gamma[i, j, k] = <nabla_{f_i} f_j, f_k>."""
    return 0.5 * (c - c.transpose(0, 2, 1) - c.transpose(2, 0, 1))


def curvature_tensor(c: np.ndarray) -> np.ndarray:
    """R[i, j, k, l] = <R(f_i, f_j) f_k, f_l>."""
    gam = connection_coefficients(c)
    return (np.einsum("jkm,iml->ijkl", gam, gam)
            - np.einsum("ikm,jml->ijkl", gam, gam)
            - np.einsum("ijm,mkl->ijkl", c, gam))


def _frame_constants(M: MetricLieAlgebra) -> np.ndarray:
    return np.asarray(M.frame_algebra.C)


def ricci_trace_formula(M: MetricLieAlgebra) -> RicciData:
    """Ricci form from traces of ad, ad* and J, plus the mean curvature terms."""
    c = _frame_constants(M)
    ad = c.transpose(0, 2, 1)                 # ad[i][k, j] = c[i, j, k]
    J = c.transpose(2, 1, 0)                  # J[i][k, j] = c[j, k, i]
    H = np.einsum("ikk->i", c)
    ad_H = np.einsum("m,mkj->kj", H, ad)
    ric = (-0.5 * np.einsum("ikl,jlk->ij", ad, ad)
           - 0.5 * np.einsum("ikl,jkl->ij", ad, ad)
           - 0.25 * np.einsum("ikl,jlk->ij", J, J)
           - 0.5 * (ad_H + ad_H.T))
    return RicciData(ric, ric.copy(), float(np.trace(ric)), np.asarray(M.frame), M.from_frame(H))


def ricci_contraction(M: MetricLieAlgebra) -> RicciData:
    """Ricci form as the trace of the full curvature tensor."""
    c = _frame_constants(M)
    R = curvature_tensor(c)
    ric = np.einsum("ijki->jk", R)
    H = np.einsum("ikk->i", c)
    return RicciData(ric, ric.copy(), float(np.trace(ric)), np.asarray(M.frame), M.from_frame(H))


def ricci_operator_basis(M: MetricLieAlgebra, data: Optional[RicciData] = None) -> np.ndarray:
    data = ricci_trace_formula(M) if data is None else data
    return M.frame @ data.ric_operator @ M.frame_inv
