"""Named families of metric Lie algebras with one- or two-dimensional derived algebra.

Default metrics make the listed basis orthonormal. Bracket relations are
given as ``[X_i, X_j] = sum`` with 1-based labels, matching the usual
presentation of these algebras.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import numkit
from .errors import BadParameters, NoExpectationsForFamily
from .geom import MetricLieAlgebra
from .liealg import LieAlgebra

FAMILIES = ("heisenberg", "affine", "indecomp5p2k", "indecomp6p2k-type1", "indecomp6p2k-type2")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    m: int = 1
    k: int = 0
    lam: Union[float, Sequence[float]] = 1.0
    metric_override: Optional[np.ndarray] = field(default=None, compare=False)

    @property
    def key(self) -> str:
        if self.family == "heisenberg":
            return f"heisenberg(m={self.m},abelian={self.k},lam={self.lam})"
        if self.family == "affine":
            return f"affine(abelian={self.k})"
        return f"{self.family}(k={self.k})"


def heisenberg(m: int = 1, abelian: int = 0, lam=1.0, metric=None) -> FamilySpec:
    return FamilySpec("heisenberg", m, abelian, lam, metric)


def affine(abelian: int = 0, metric=None) -> FamilySpec:
    return FamilySpec("affine", 1, abelian, 1.0, metric)


def indecomp5p2k(k: int = 0, metric=None) -> FamilySpec:
    return FamilySpec("indecomp5p2k", 1, k, 1.0, metric)


def indecomp6p2k_type1(k: int = 0, metric=None) -> FamilySpec:
    return FamilySpec("indecomp6p2k-type1", 1, k, 1.0, metric)


def indecomp6p2k_type2(k: int = 0, metric=None) -> FamilySpec:
    return FamilySpec("indecomp6p2k-type2", 1, k, 1.0, metric)


def dimension(spec: FamilySpec) -> int:
    return {
        "heisenberg": 2 * spec.m + 1 + spec.k,
        "affine": 2 + spec.k,
        "indecomp5p2k": 5 + 2 * spec.k,
        "indecomp6p2k-type1": 6 + 2 * spec.k,
        "indecomp6p2k-type2": 6 + 2 * spec.k,
    }[spec.family]


def _from_relations(n: int, relations, labels=None) -> LieAlgebra:
    """``relations``: iterable of (i, j, {k: coeff}) meaning [X_i, X_j] = sum coeff X_k (1-based)."""
    br: dict = {}
    for i, j, res in relations:
        v = np.zeros(n)
        for k, coeff in res.items():
            v[k - 1] = coeff
        if i > j:
            i, j, v = j, i, -v
        key = (i - 1, j - 1)
        br[key] = br.get(key, np.zeros(n)) + v
    return LieAlgebra.from_brackets(n, br, labels)


def algebra(spec: FamilySpec) -> LieAlgebra:
    if spec.family not in FAMILIES:
        raise BadParameters(f"unknown family {spec.family!r}; choose from {', '.join(FAMILIES)}")
    if spec.k < 0 or spec.m < 1:
        raise BadParameters("need m >= 1 and k >= 0")
    n = dimension(spec)
    rel = []
    if spec.family == "heisenberg":
        lams = [float(spec.lam)] * spec.m if np.isscalar(spec.lam) else [float(x) for x in spec.lam]
        if len(lams) != spec.m or any(x == 0 or not np.isfinite(x) for x in lams):
            raise BadParameters("need one nonzero finite block scale per Heisenberg block")
        labels = ["e"]
        for b in range(spec.m):
            labels += [f"u{b + 1}", f"v{b + 1}"] if spec.m > 1 else ["u", "v"]
            rel.append((2 + 2 * b, 3 + 2 * b, {1: lams[b]}))
        labels += [f"z{i + 1}" for i in range(spec.k)]
        return _from_relations(n, rel, labels)
    if spec.family == "affine":
        labels = ["e", "x"] + [f"z{i + 1}" for i in range(spec.k)]
        return _from_relations(n, [(2, 1, {1: 1.0})], labels)
    k = spec.k
    if spec.family == "indecomp5p2k":
        rel = [(3, 4, {1: 1.0}), (3, 1, {2: 1.0})]
        rel += [(4 + 2 * j, 5 + 2 * j, {2: 1.0}) for j in range(k + 1)]
    elif spec.family == "indecomp6p2k-type1":
        rel = [(3, 1, {1: 1.0}), (3, 4, {2: 1.0})]
        rel += [(5 + 2 * j, 6 + 2 * j, {2: 1.0}) for j in range(k + 1)]
    else:
        rel = [(3, 4, {1: 1.0}), (3, 1, {2: 1.0})]
        rel += [(5 + 2 * j, 6 + 2 * j, {2: 1.0}) for j in range(k + 1)]
    return _from_relations(n, rel)


def build(spec: FamilySpec) -> MetricLieAlgebra:
    L = algebra(spec)
    return MetricLieAlgebra(L, spec.metric_override)


def two_step_nilpotent(f1, f2, labels=None) -> LieAlgebra:
    """Basis (e1, e2, gamma...) with [u, v] = <f1 u, v> e1 + <f2 u, v> e2 and nothing else."""
    f1 = numkit.as_mat(f1)
    f2 = numkit.as_mat(f2, *f1.shape)
    m = f1.shape[0]
    n = m + 2
    C = np.zeros((n, n, n))
    C[2:, 2:, 0] = f1.T
    C[2:, 2:, 1] = f2.T
    if labels is None:
        labels = ["e1", "e2"] + [f"g{i + 1}" for i in range(m)]
    return LieAlgebra(C, labels)


def random_skew(rng: np.random.Generator, m: int) -> np.ndarray:
    A = rng.standard_normal((m, m))
    return A - A.T


# ---------------------------------------------------------------------------
# reference values for the three indecomposable families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Expected:
    key: str
    value: object
    citation: str
    disputed: bool = False
    note: str = ""


def expected(spec: FamilySpec) -> list[Expected]:
    """Published reference values for the indecomposable families.

    Nothing here feeds the analysis; the report compares these against
    independently computed numbers. ``disputed`` marks entries that the
    computation is known to contradict. ``citation`` restates each value
    as a formula.
    """
    n = dimension(spec)
    k = spec.k
    off = "reference trace counts one more 2x2 block than the bracket relations contain"
    if spec.family == "indecomp5p2k":
        return [
            Expected("a2", "X3", "a2 = X3, a1 = b1 = b2 = 0"),
            Expected("tr(f1^2)", -2.0, "tr(f1^2) = -2"),
            Expected("tr(f2^2)", float(1 - n), "tr(f2^2) = 1 - n", True, off),
            Expected("tr(f1 f2)", 0.0, "tr(f1 f2) = 0"),
            Expected("Ric(e1)", 0.0, "Ric(e1) = 0"),
            Expected("Ric(e2).e2", (n + 1) / 4, "Ric(e2) = (n+1)/4 e2", True, off),
            Expected("c from eq8", -(n + 5) / 4, "c = -(n+5)/4 from eq8", True,
                     "eq8 evaluated with the computed B2 gives -(n+3)/4"),
            Expected("c from eq11", -2.0, "c = -2 from eq11", True,
                     "eq11 evaluated with the computed B2 gives -(n+5)/4"),
            Expected("is_soliton", False, "not a Ricci soliton"),
        ]
    if spec.family == "indecomp6p2k-type1":
        return [
            Expected("a1", "X3", "a1 = X3, a2 = b1 = b2 = 0"),
            Expected("tr(f1^2)", 0.0, "tr(f1^2) = 0"),
            Expected("tr(f2^2)", float(-n), "tr(f2^2) = -n", True, off),
            Expected("tr(f1 f2)", 0.0, "tr(f1 f2) = 0"),
            Expected("Ric(e1).e1", -1.0, "Ric(e1) = -e1"),
            Expected("Ric(e2).e2", n / 4, "Ric(e2) = n/4 e2 - 1/2 X4", True, off),
            Expected("E2", "-1/2 X4", "Ric(e2) = n/4 e2 - 1/2 X4"),
            Expected("c from eq6", -1.5, "c = -3/2"),
            Expected("is_soliton", False, "not a Ricci soliton"),
        ]
    if spec.family == "indecomp6p2k-type2":
        return [
            Expected("a2", "X3", "a2 = X3, a1 = b1 = b2 = 0"),
            Expected("tr(f1^2)", -2.0, "tr(f1^2) = -2"),
            Expected("tr(f2^2)", float(2 - n), "tr(f2^2) = 2 - n = -4 - 2k", True, off),
            Expected("tr(f1 f2)", 0.0, "tr(f1 f2) = 0"),
            Expected("Ric(e1)", 0.0, "Ric(e1) = 0"),
            Expected("Ric(e2).e2", (k + 3) / 2, "Ric(e2) = (k+3)/2 e2", True, off),
            Expected("c from eq8", -(k + 5) / 2, "c = -(k+5)/2 from eq8", True,
                     "eq8 evaluated with the computed B2 gives -(k+4)/2"),
            Expected("is_soliton", False, "not a Ricci soliton"),
        ]
    raise NoExpectationsForFamily(spec.family)


def pretty_fraction(x: float, max_den: int = 64) -> Optional[str]:
    fr = Fraction(x).limit_denominator(max_den)
    if abs(float(fr) - x) <= 1e-9 * max(1.0, abs(x)):
        return str(fr)
    return None
