"""Small dense linear algebra over float64 with explicit tolerances.

Vectors and matrices are plain numpy arrays. Every comparison goes through
the hybrid test ``|x - y| <= eps * max(1, |x|, |y|)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DependentInput, DimensionMismatch, NonFiniteValue

EPS = 1e-9


def as_vec(x, n: Optional[int] = None) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise DimensionMismatch(f"expected length {n}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteValue("vector has non-finite entries")
    return v


def as_mat(a, rows: Optional[int] = None, cols: Optional[int] = None) -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
    if (rows is not None and m.shape[0] != rows) or (cols is not None and m.shape[1] != cols):
        raise DimensionMismatch(f"expected {rows}x{cols}, got {m.shape[0]}x{m.shape[1]}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteValue("matrix has non-finite entries")
    return m


def frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def close(x, y, eps: float = EPS) -> bool:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    scale = np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))
    return bool(np.all(np.abs(x - y) <= eps * scale))


def is_zero(x, eps: float = EPS) -> bool:
    return bool(np.all(np.abs(np.asarray(x, dtype=float)) <= eps))


def inner(x, y, G: Optional[np.ndarray] = None) -> float:
    if G is None:
        return float(np.dot(x, y))
    return float(np.asarray(x) @ G @ np.asarray(y))


def norm(x, G: Optional[np.ndarray] = None) -> float:
    return float(np.sqrt(max(inner(x, x, G), 0.0)))


def _orthogonalize(v: np.ndarray, basis: Sequence[np.ndarray], G: np.ndarray) -> np.ndarray:
    # classical Gram-Schmidt step, repeated once
    for _ in range(2):
        coeffs = [inner(w, v, G) for w in basis]
        for c, w in zip(coeffs, basis):
            v = v - c * w
    return v


def gram_schmidt(vectors: Iterable, inner_mat=None, eps: float = EPS) -> list[np.ndarray]:
    """Orthonormalize ``vectors`` in order under the inner product ``inner_mat``.

    Raises DependentInput when a residual collapses below ``eps`` relative to
    the input vector's own length.
    """
    vecs = [as_vec(v) for v in vectors]
    if not vecs:
        return []
    n = vecs[0].shape[0]
    G = np.eye(n) if inner_mat is None else as_mat(inner_mat, n, n)
    out: list[np.ndarray] = []
    for idx, v in enumerate(vecs):
        if v.shape[0] != n:
            raise DimensionMismatch("vectors of unequal length")
        r = _orthogonalize(v, out, G)
        rn = norm(r, G)
        if rn <= eps * max(1.0, norm(v, G)):
            raise DependentInput(f"vector {idx} is dependent on its predecessors")
        out.append(r / rn)
    return out


def extend_orthonormal(start: Sequence[np.ndarray], candidates: Iterable,
                       inner_mat=None, eps: float = 1e-7) -> list[np.ndarray]:
    """Greedily add candidates (orthonormalized) that are independent of what came before.

    ``start`` must already be orthonormal; only the new vectors are returned.
    """
    start = [as_vec(v) for v in start]
    cand = [as_vec(v) for v in candidates]
    n = (start or cand)[0].shape[0]
    G = np.eye(n) if inner_mat is None else as_mat(inner_mat, n, n)
    basis = list(start)
    added = []
    for v in cand:
        r = _orthogonalize(v, basis, G)
        rn = norm(r, G)
        if rn > eps * max(1.0, norm(v, G)):
            w = r / rn
            basis.append(w)
            added.append(w)
    return added


def row_echelon_basis(vectors: Iterable, eps: float = EPS) -> np.ndarray:
    """Reduced row echelon basis of the span of ``vectors`` (rows of the result).

    Canonical for the subspace: the same span always yields the same rows,
    and coordinate subspaces come back as standard basis vectors.
    """
    rows = [as_vec(v) for v in vectors]
    if not rows:
        return np.zeros((0, 0))
    A = np.array(rows, dtype=float)
    m, n = A.shape
    scale = max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)
    tol = eps * scale
    r = 0
    for col in range(n):
        if r == m:
            break
        piv = r + int(np.argmax(np.abs(A[r:, col])))
        if abs(A[piv, col]) <= tol:
            A[r:, col] = 0.0
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] / A[r, col]
        for i in range(m):
            if i != r:
                A[i] = A[i] - A[i, col] * A[r]
        r += 1
    A = A[:r]
    A[np.abs(A) <= tol] = 0.0
    return A


class Solution(enum.Enum):
    UNIQUE = "unique"
    UNDERDETERMINED = "underdetermined"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class ScalarSolution:
    kind: Solution
    c: Optional[float] = None
    residual: float = 0.0

    @property
    def feasible(self) -> bool:
        return self.kind is not Solution.INFEASIBLE


def solve_for_scalar(constraints: Sequence[tuple], eps: float = EPS) -> ScalarSolution:
    """Find the scalar ``c`` with ``c * lhs == rhs`` for every (lhs, rhs) pair.

    The least-squares ``c`` over all pairs with nonzero lhs is tested against
    every pair with the hybrid comparison.
    """
    lhs = [as_vec(l) for l, _ in constraints]
    rhs = [as_vec(r) for _, r in constraints]
    for l, r in zip(lhs, rhs):
        if l.shape != r.shape:
            raise DimensionMismatch("constraint sides differ in length")
    active = [(l, r) for l, r in zip(lhs, rhs) if not is_zero(l, eps)]
    if not active:
        worst = max((float(np.max(np.abs(r))) for r in rhs if r.size), default=0.0)
        if worst <= eps:
            return ScalarSolution(Solution.UNDERDETERMINED, None, worst)
        return ScalarSolution(Solution.INFEASIBLE, None, worst)
    num = sum(float(np.dot(l, r)) for l, r in active)
    den = sum(float(np.dot(l, l)) for l, _ in active)
    c = num / den
    worst = 0.0
    ok = True
    for l, r in zip(lhs, rhs):
        if r.size == 0:
            continue
        worst = max(worst, float(np.max(np.abs(c * l - r))))
        if not close(c * l, r, eps):
            ok = False
    if ok:
        return ScalarSolution(Solution.UNIQUE, c, worst)
    return ScalarSolution(Solution.INFEASIBLE, c, worst)


def spd_failure(G, eps: float = EPS) -> Optional[str]:
    """Describe why ``G`` is not symmetric positive definite, or None if it is."""
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        return f"metric is not square (shape {G.shape})"
    if not np.all(np.isfinite(G)):
        return "metric has non-finite entries"
    if not close(G, G.T, eps):
        return "metric is not symmetric"
    for k in range(1, G.shape[0] + 1):
        minor = float(np.linalg.det(G[:k, :k]))
        if minor <= eps:
            return f"leading principal minor {k} = {minor:.6g} is not positive"
    return None


def spd_check(G, eps: float = EPS) -> bool:
    return spd_failure(G, eps) is None


def skew_residual(F: np.ndarray) -> float:
    """Max entry of F + F^T; zero for maps skew-adjoint in an orthonormal basis."""
    return float(np.max(np.abs(F + F.T))) if F.size else 0.0


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_spd(rng: np.random.Generator, n: int, cond: float = 1e3) -> np.ndarray:
    """Random SPD matrix with condition number at most ``cond``."""
    q = random_orthogonal(rng, n)
    eig = np.exp(rng.uniform(0.0, np.log(cond), size=n))
    eig /= eig.min()
    G = (q * eig) @ q.T
    return 0.5 * (G + G.T)
