"""Orthogonal splitting g = g^1 + Gamma for derived algebras of dimension 1 or 2.

Everything in a :class:`DerivedDecomposition` lives in the decomposition
frame ``(e_1[, e_2], gamma_1, ..., gamma_{n-d})``. The invariant vectors
(a, a1, a2, b1, b2) and maps (f, f1, f2) are stored in Gamma coordinates;
``frame`` holds the frame vectors as columns in the original basis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import numkit
from .errors import ClosureViolation, NonAbelianDerived, UnsupportedDerivedDim
from .geom import MetricLieAlgebra
from .liealg import LieAlgebra, derived_subalgebra


class Kind(enum.Enum):
    ONE_DIM = "OneDim"
    TWO_DIM = "TwoDim"


@dataclass(frozen=True)
class DerivedDecomposition:
    kind: Kind
    frame: np.ndarray            # n x n, columns e..., gamma... in basis coords
    frame_algebra: LieAlgebra    # structure constants in the decomposition frame
    labels: tuple
    a: Optional[np.ndarray] = None
    f: Optional[np.ndarray] = None
    a1: Optional[np.ndarray] = None
    a2: Optional[np.ndarray] = None
    b1: Optional[np.ndarray] = None
    b2: Optional[np.ndarray] = None
    f1: Optional[np.ndarray] = None
    f2: Optional[np.ndarray] = None

    @property
    def d(self) -> int:
        return 1 if self.kind is Kind.ONE_DIM else 2

    @property
    def n(self) -> int:
        return self.frame.shape[0]

    @property
    def gamma_dim(self) -> int:
        return self.n - self.d

    @property
    def e_basis(self) -> list:
        return [self.frame[:, i] for i in range(self.d)]

    @property
    def gamma_basis(self) -> list:
        return [self.frame[:, i] for i in range(self.d, self.n)]

    def lift(self, u) -> np.ndarray:
        """Gamma coordinates -> decomposition-frame coordinates."""
        return np.concatenate([np.zeros(self.d), numkit.as_vec(u, self.gamma_dim)])

    def to_basis(self, x) -> np.ndarray:
        """Decomposition-frame coordinates -> original basis coordinates."""
        return self.frame @ numkit.as_vec(x, self.n)

    def gamma_to_basis(self, u) -> np.ndarray:
        return self.to_basis(self.lift(u))

    def frame_metric(self) -> MetricLieAlgebra:
        """The same metric Lie algebra written in the decomposition frame (identity metric)."""
        return MetricLieAlgebra(self.frame_algebra, np.eye(self.n))


def _fix_sign(v: np.ndarray, eps: float) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > eps)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def _basis_labels(M: MetricLieAlgebra, vecs, prefix: str, eps: float) -> list:
    out = []
    for idx, v in enumerate(vecs):
        hit = [i for i in range(M.dim) if numkit.close(v, np.eye(M.dim)[i] / np.sqrt(M.metric[i, i]), 1e-9)
               and np.count_nonzero(np.abs(v) > eps) == 1]
        out.append(M.labels[hit[0]] if hit else f"{prefix}{idx + 1}")
    return out


def decompose(M: MetricLieAlgebra, eps: float = numkit.EPS, e_rotation=None) -> DerivedDecomposition:
    """Split ``M`` along its derived algebra.

    ``e_rotation`` (2x2 orthogonal) remixes e_1, e_2 for the TwoDim case; the
    default is the deterministic Gram-Schmidt order.
    """
    info = derived_subalgebra(M.algebra, eps)
    if info.dim1 not in (1, 2):
        raise UnsupportedDerivedDim(f"derived algebra has dimension {info.dim1}; need 1 or 2")
    G = M.metric
    e_vecs = [_fix_sign(v, eps) for v in numkit.gram_schmidt(list(info.basis1), G, eps)]
    if e_rotation is not None and len(e_vecs) == 2:
        R = numkit.as_mat(e_rotation, 2, 2)
        E = np.column_stack(e_vecs) @ R
        e_vecs = [E[:, 0], E[:, 1]]
    gammas = numkit.extend_orthonormal(e_vecs, list(np.eye(M.dim)), G)
    if len(gammas) != M.dim - info.dim1:
        raise ClosureViolation("could not complete an orthonormal frame for Gamma")
    P = np.column_stack(e_vecs + gammas)
    frame_alg = M.algebra.change_basis(P)
    d_labels = ["e"] if info.dim1 == 1 else ["e1", "e2"]
    labels = tuple(d_labels + _basis_labels(M, gammas, "g", eps))
    frame_alg = LieAlgebra(frame_alg.C, labels)
    return decompose_frame(frame_alg, P, eps, d=info.dim1)


def decompose_frame(frame_alg: LieAlgebra, P: np.ndarray, eps: float = numkit.EPS,
                    d: Optional[int] = None) -> DerivedDecomposition:
    """Read off (a, f) or (a1, a2, b1, b2, f1, f2) from structure constants in an orthonormal frame.

    The first ``d`` frame vectors must span the derived algebra.
    """
    c = np.asarray(frame_alg.C)
    n = c.shape[0]
    if d is None:
        d = derived_subalgebra(frame_alg, eps).dim1
    if d not in (1, 2):
        raise UnsupportedDerivedDim(f"derived algebra has dimension {d}; need 1 or 2")
    scale = max(1.0, float(np.max(np.abs(c))))
    # every bracket must land in span(e_1..e_d)
    leak = float(np.max(np.abs(c[:, :, d:]))) if n > d else 0.0
    if leak > 1e3 * eps * scale:
        raise ClosureViolation(f"bracket leaves the derived algebra (component {leak:.3g})")
    g = slice(d, n)
    P = numkit.frozen(P)
    if d == 1:
        a = c[g, 0, 0]
        f = c[g, g, 0].T  # f[j, i] = <f(gamma_i), gamma_j> = c[i, j, e]
        return DerivedDecomposition(Kind.ONE_DIM, P, frame_alg, frame_alg.labels,
                                    a=numkit.frozen(a), f=numkit.frozen(f))
    if abs(c[0, 1, 0]) > 1e3 * eps * scale or abs(c[0, 1, 1]) > 1e3 * eps * scale:
        raise NonAbelianDerived("[e1, e2] != 0: derived algebra is not abelian")
    return DerivedDecomposition(
        Kind.TWO_DIM, P, frame_alg, frame_alg.labels,
        a1=numkit.frozen(c[g, 0, 0]), a2=numkit.frozen(c[g, 0, 1]),
        b1=numkit.frozen(c[g, 1, 0]), b2=numkit.frozen(c[g, 1, 1]),
        f1=numkit.frozen(c[g, g, 0].T), f2=numkit.frozen(c[g, g, 1].T),
    )


def from_invariants(a=None, f=None, *, a1=None, a2=None, b1=None, b2=None, f1=None, f2=None,
                    labels=None) -> DerivedDecomposition:
    """Build a decomposition directly from its invariants (frame = standard basis).

    Useful for synthetic instances; no Jacobi check is performed here.
    """
    if f is not None or a is not None:
        m = np.shape(f)[0] if f is not None else len(a)
        a = np.zeros(m) if a is None else numkit.as_vec(a, m)
        f = np.zeros((m, m)) if f is None else numkit.as_mat(f, m, m)
        d, kind = 1, Kind.ONE_DIM
        fields = dict(a=numkit.frozen(a), f=numkit.frozen(f))
    else:
        m = np.shape(f1)[0]
        z = np.zeros(m)
        vecs = [numkit.as_vec(v, m) if v is not None else z for v in (a1, a2, b1, b2)]
        f1 = numkit.as_mat(f1, m, m)
        f2 = np.zeros((m, m)) if f2 is None else numkit.as_mat(f2, m, m)
        d, kind = 2, Kind.TWO_DIM
        fields = dict(zip(("a1", "a2", "b1", "b2"), map(numkit.frozen, vecs)),
                      f1=numkit.frozen(f1), f2=numkit.frozen(f2))
    n = m + d
    if labels is None:
        labels = (["e"] if d == 1 else ["e1", "e2"]) + [f"g{i + 1}" for i in range(m)]
    proto = DerivedDecomposition(kind, numkit.frozen(np.eye(n)), LieAlgebra.abelian(n), tuple(labels), **fields)
    alg = reconstruct_brackets(proto)
    return DerivedDecomposition(kind, proto.frame, LieAlgebra(alg.C, labels), tuple(labels), **fields)


def reconstruct_brackets(dd: DerivedDecomposition) -> LieAlgebra:
    """Structure constants in the decomposition frame rebuilt from the invariants alone."""
    n, d = dd.n, dd.d
    C = np.zeros((n, n, n))
    g = slice(d, n)
    if dd.kind is Kind.ONE_DIM:
        C[g, 0, 0] = dd.a
        C[0, g, 0] = -dd.a
        C[g, g, 0] = dd.f.T
    else:
        C[g, 0, 0], C[g, 0, 1] = dd.a1, dd.a2
        C[g, 1, 0], C[g, 1, 1] = dd.b1, dd.b2
        C[0, g, 0], C[0, g, 1] = -dd.a1, -dd.a2
        C[1, g, 0], C[1, g, 1] = -dd.b1, -dd.b2
        C[g, g, 0] = dd.f1.T
        C[g, g, 1] = dd.f2.T
    return LieAlgebra(C, dd.labels)


@dataclass(frozen=True)
class Unimodularity:
    unimodular: bool
    witness: np.ndarray  # Gamma coordinates


def unimodularity_witness(dd: DerivedDecomposition, eps: float = numkit.EPS) -> Unimodularity:
    w = dd.a if dd.kind is Kind.ONE_DIM else dd.a1 + dd.b2
    return Unimodularity(bool(numkit.norm(w) <= eps), np.array(w))


def parallel_defect(x: np.ndarray, y: np.ndarray) -> float:
    """|x|^2 |y|^2 - <x, y>^2; zero iff x and y are parallel."""
    return float(np.dot(x, x) * np.dot(y, y) - np.dot(x, y) ** 2)
