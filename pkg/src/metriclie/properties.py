"""Seeded property battery: random metric Lie algebras and the invariants they must satisfy.

Each ``check_*`` function returns a relative residual, i.e. the largest
deviation divided by ``max(1, magnitude of the terms involved)``. The
``selftest`` CLI command and the acceptance tests both run these.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import catalog, decomp, geom, numkit, onedim, soliton, twodim
from .geom import MetricLieAlgebra


def _rel(diff, *terms) -> float:
    d = float(np.max(np.abs(diff))) if np.size(diff) else 0.0
    mag = max([1.0] + [float(np.max(np.abs(t))) for t in terms if np.size(t)])
    return d / mag


# ---------------------------------------------------------------------------
# instance generators
# ---------------------------------------------------------------------------

ONE_DIM_FAMILIES = (
    catalog.heisenberg(1, 0), catalog.heisenberg(1, 1), catalog.heisenberg(1, 2),
    catalog.heisenberg(2, 0), catalog.heisenberg(2, 1),
    catalog.affine(0), catalog.affine(1), catalog.affine(2),
)
TWO_DIM_FAMILIES = (
    catalog.indecomp5p2k(0), catalog.indecomp5p2k(1),
    catalog.indecomp6p2k_type1(0), catalog.indecomp6p2k_type1(1),
    catalog.indecomp6p2k_type2(0), catalog.indecomp6p2k_type2(1),
)


def block_metric(rng: np.random.Generator, sizes, cond: float = 1e3) -> np.ndarray:
    """Block-diagonal SPD metric; a block given as ('scalar', k) is a multiple of the identity.

    All eigenvalues lie in [1, cond], so the whole matrix keeps condition number <= cond.
    """
    blocks = []
    for s in sizes:
        if isinstance(s, tuple):
            blocks.append(np.exp(rng.uniform(0.0, np.log(cond))) * np.eye(s[1]))
        else:
            blocks.append(numkit.random_spd(rng, s, cond))
    n = sum(b.shape[0] for b in blocks)
    G = np.zeros((n, n))
    i = 0
    for b in blocks:
        k = b.shape[0]
        G[i:i + k, i:i + k] = b
        i += k
    return G


def random_metric_for(spec: catalog.FamilySpec, rng: np.random.Generator, cond: float = 1e3) -> np.ndarray:
    """Random SPD metric; about half the time block-structured so solitons occur."""
    n = catalog.dimension(spec)
    if rng.random() < 0.5:
        return numkit.random_spd(rng, n, cond)
    if spec.family == "heisenberg":
        core = 2 * spec.m + 1
        head = (("scalar", core),) if spec.m > 1 else (core,)
        return block_metric(rng, head + ((spec.k,) if spec.k else ()), cond)
    if spec.family == "affine":
        return block_metric(rng, (2,) + ((spec.k,) if spec.k else ()), cond)
    return numkit.random_spd(rng, n, cond)


def random_two_step(rng: np.random.Generator, soliton: bool) -> tuple:
    """A 2-step nilpotent algebra with 2-dimensional centre-derived algebra, plus metric."""
    if soliton:
        lam = np.exp(rng.uniform(-0.5, 0.5))
        J = np.array([[0.0, -lam], [lam, 0.0]])
        z = np.zeros((2, 2))
        f1 = np.block([[J, z], [z, z]])
        f2 = np.block([[z, z], [z, J]])
        L = catalog.two_step_nilpotent(f1, f2)
        G = np.eye(6) * np.exp(rng.uniform(-1, 1))
        return "two-step(H3xH3)", L, G
    m = int(rng.integers(3, 6))
    f1, f2 = catalog.random_skew(rng, m), catalog.random_skew(rng, m)
    L = catalog.two_step_nilpotent(f1, f2)
    return f"two-step(m={m})", L, numkit.random_spd(rng, m + 2, 1e2)


@dataclass
class Instance:
    key: str
    M: MetricLieAlgebra


def catalog_instances(rng: np.random.Generator, count: int, families=None, cond: float = 1e3) -> list:
    families = ONE_DIM_FAMILIES + TWO_DIM_FAMILIES if families is None else families
    out = []
    for t in range(count):
        spec = families[t % len(families)]
        G = random_metric_for(spec, rng, cond)
        out.append(Instance(f"{spec.key}#{t}", MetricLieAlgebra(catalog.algebra(spec), G)))
    return out


# ---------------------------------------------------------------------------
# generic geometry
# ---------------------------------------------------------------------------

def _random_vec(M: MetricLieAlgebra, rng) -> np.ndarray:
    return M.frame @ rng.standard_normal(M.dim)


def check_torsion_free(M: MetricLieAlgebra, rng, trials: int = 4) -> float:
    worst = 0.0
    for _ in range(trials):
        x, y = _random_vec(M, rng), _random_vec(M, rng)
        a, b, br = geom.nabla(M, x, y), geom.nabla(M, y, x), M.algebra.bracket(x, y)
        worst = max(worst, _rel(a - b - br, a, b, br))
    return worst


def check_metric_compatible(M: MetricLieAlgebra, rng, trials: int = 4) -> float:
    worst = 0.0
    F = M.frame
    for _ in range(trials):
        i, j, k = rng.integers(0, M.dim, size=3)
        x, y, z = F[:, i], F[:, j], F[:, k]
        s1 = M.inner(geom.nabla(M, x, y), z)
        s2 = M.inner(y, geom.nabla(M, x, z))
        worst = max(worst, _rel(s1 + s2, s1, s2))
    return worst


def check_curvature_symmetries(M: MetricLieAlgebra, rng, spot: int = 2) -> tuple[float, float]:
    """(pair/antisymmetry residual, first Bianchi residual) of the frame curvature tensor.

    A few entries are also recomputed through ``geom.curvature`` so the
    tensor and the nabla-based route stay tied together.
    """
    c = np.asarray(M.frame_algebra.C)
    R = geom.curvature_tensor(c)
    sym = max(_rel(R + R.transpose(1, 0, 2, 3), R),
              _rel(R + R.transpose(0, 1, 3, 2), R),
              _rel(R - R.transpose(2, 3, 0, 1), R))
    bianchi = _rel(R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3), R)
    F = M.frame
    for _ in range(spot):
        i, j, k, l = rng.integers(0, M.dim, size=4)
        val = M.inner(geom.curvature(M, F[:, i], F[:, j], F[:, k]), F[:, l])
        sym = max(sym, _rel(val - R[i, j, k, l], R))
    return sym, bianchi


def check_dual_ricci(M: MetricLieAlgebra) -> float:
    a = geom.ricci_trace_formula(M).ric_operator
    b = geom.ricci_contraction(M).ric_operator
    return _rel(a - b, a, b)


# ---------------------------------------------------------------------------
# closed forms vs generic
# ---------------------------------------------------------------------------

def _frame_maps(M: MetricLieAlgebra, d: decomp.DerivedDecomposition):
    P = d.frame
    Pinv = P.T @ M.metric
    return P, Pinv


def check_specialized(M: MetricLieAlgebra, d: decomp.DerivedDecomposition, rng) -> dict:
    """Closed-form connection, sectional curvature and Ricci vs the generic routines."""
    P, Pinv = _frame_maps(M, d)
    n = M.dim
    I = np.eye(n)
    conn = onedim.connection_1d if d.kind is decomp.Kind.ONE_DIM else twodim.connection_2d
    worst_conn = 0.0
    for i in range(n):
        for j in range(n):
            want = Pinv @ geom.nabla(M, P[:, i], P[:, j])
            got = conn(d, I[i], I[j])
            worst_conn = max(worst_conn, _rel(got - want, got, want))
    # sectional over frame planes plus one random Gamma plane
    worst_sec = 0.0
    m = d.gamma_dim
    names = ["e"] if d.d == 1 else ["e1", "e2"]
    planes = []
    for i in range(n):
        for j in range(i + 1, n):
            planes.append((i, j))
    for i, j in planes:
        want = geom.sectional(M, P[:, i], P[:, j])
        if d.kind is decomp.Kind.ONE_DIM:
            if i == 0:
                got = onedim.sectional_1d(d, I[j][1:])
            else:
                got = onedim.sectional_1d(d, I[i][1:], I[j][1:])
        else:
            p = names[i] if i < 2 else I[i][2:]
            q = names[j] if j < 2 else I[j][2:]
            got = twodim.sectional_2d(d, (p, q))
        worst_sec = max(worst_sec, _rel(got - want, got, want))
    if m >= 2:
        Q = numkit.random_orthogonal(rng, m)
        u, v = Q[:, 0], Q[:, 1]
        want = geom.sectional(M, d.gamma_to_basis(u), d.gamma_to_basis(v))
        got = (onedim.sectional_1d(d, u, v) if d.d == 1 else twodim.sectional_2d(d, (u, v)))
        worst_sec = max(worst_sec, _rel(got - want, got, want))
        e_name = "e" if d.d == 1 else "e1"
        want = geom.sectional(M, d.gamma_to_basis(u), P[:, 0])
        got = (onedim.sectional_1d(d, u) if d.d == 1 else twodim.sectional_2d(d, (e_name, u)))
        worst_sec = max(worst_sec, _rel(got - want, got, want))
    ric_generic = Pinv @ geom.ricci_operator_basis(M) @ P
    ric_closed = (onedim.ricci_1d(d).operator if d.d == 1 else twodim.ricci_2d(d).operator)
    worst_ric = _rel(ric_closed - ric_generic, ric_closed, ric_generic)
    return {"connection": worst_conn, "sectional": worst_sec, "ricci": worst_ric}


def check_decomposition_laws(M: MetricLieAlgebra, d: decomp.DerivedDecomposition) -> dict:
    out = {}
    P, Pinv = _frame_maps(M, d)
    H = Pinv @ geom.mean_curvature_vector(M)
    w = decomp.unimodularity_witness(d).witness
    out["witness_vs_H"] = _rel(H - d.lift(w), H, w)
    recon = decomp.reconstruct_brackets(d).C
    out["reconstruction"] = _rel(recon - d.frame_algebra.C, recon)
    if d.kind is decomp.Kind.TWO_DIM:
        scale = max(1.0, float(np.dot(d.a2, d.a2)) * float(np.dot(d.b1, d.b1)))
        out["a2_b1_parallel"] = abs(decomp.parallel_defect(d.a2, d.b1)) / scale
        out["f_skew"] = max(numkit.skew_residual(d.f1), numkit.skew_residual(d.f2)) / max(
            1.0, float(np.max(np.abs(d.f1))), float(np.max(np.abs(d.f2))))
        out["tr_f1f2_symmetric"] = _rel(np.trace(d.f1 @ d.f2) - np.trace(d.f2 @ d.f1), d.f1 @ d.f2)
    else:
        out["f_skew"] = numkit.skew_residual(d.f) / max(1.0, float(np.max(np.abs(d.f))) if d.f.size else 1.0)
    return out


# ---------------------------------------------------------------------------
# soliton oracle
# ---------------------------------------------------------------------------

def check_oracle_equivariance(M: MetricLieAlgebra, rng, scales=(0.5, 2.0, 10.0), eps=numkit.EPS) -> dict:
    base = soliton.oracle_solve(M, eps)
    Q = numkit.random_orthogonal(rng, M.dim)
    moved = soliton.oracle_solve(M.change_basis(M.frame @ Q), eps)
    out = {"frame_verdict_mismatch": float(moved.is_soliton != base.is_soliton), "frame_c": 0.0,
           "scale_verdict_mismatch": 0.0, "scale_c": 0.0, "is_soliton": base.is_soliton}
    if base.is_soliton and moved.is_soliton:
        out["frame_c"] = _rel(moved.c - base.c, base.c)
    for t in scales:
        s = soliton.oracle_solve(M.scaled(t), eps)
        out["scale_verdict_mismatch"] = max(out["scale_verdict_mismatch"], float(s.is_soliton != base.is_soliton))
        if base.is_soliton and s.is_soliton:
            out["scale_c"] = max(out["scale_c"], _rel(s.c - base.c / t, base.c))
    return out


@dataclass
class OneDimTally:
    nonunimodular: int = 0
    nonunimodular_agree: int = 0
    nonunimodular_solitons: int = 0
    unimodular: int = 0
    unimodular_agree: int = 0
    unimodular_solitons_c_nonzero: int = 0
    literal_disagreements: int = 0
    c_mismatch: float = 0.0


def tally_theorem21(instances, eps: float = numkit.EPS) -> OneDimTally:
    t = OneDimTally()
    for inst in instances:
        d = decomp.decompose(inst.M, eps)
        if d.kind is not decomp.Kind.ONE_DIM:
            continue
        o = soliton.oracle_solve(inst.M, eps)
        r = onedim.theorem21_classify(d, eps)
        if r.paper_soliton != o.is_soliton or (o.is_soliton and not numkit.close(r.paper_c, o.c, 1e-6)):
            t.literal_disagreements += 1
        if np.linalg.norm(d.a) > eps:
            t.nonunimodular += 1
            t.nonunimodular_solitons += int(o.is_soliton)
            agree = r.paper_soliton == o.is_soliton
            if agree and o.is_soliton:
                t.c_mismatch = max(t.c_mismatch, _rel(r.paper_c - o.c, o.c))
            t.nonunimodular_agree += int(agree)
        else:
            t.unimodular += 1
            agree = r.corrected_soliton == o.is_soliton
            if agree and o.is_soliton:
                t.c_mismatch = max(t.c_mismatch, _rel(r.corrected_c - o.c, o.c))
            t.unimodular_agree += int(agree)
            if o.is_soliton and abs(o.c) > eps:
                t.unimodular_solitons_c_nonzero += 1
    return t


# ---------------------------------------------------------------------------
# battery
# ---------------------------------------------------------------------------

@dataclass
class PropertyResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.value <= self.tolerance


@dataclass
class Battery:
    results: list = field(default_factory=list)

    def record(self, name: str, value: float, tol: float):
        for r in self.results:
            if r.name == name:
                r.value = max(r.value, value)
                return
        self.results.append(PropertyResult(name, value, tol))

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.passed]


def run_battery(seed: int = 0, trials: int = 200, tol: float = 1e-8, eps: float = numkit.EPS) -> Battery:
    rng = np.random.default_rng(seed)
    bat = Battery()
    insts = catalog_instances(rng, trials)
    for inst in insts:
        M = inst.M
        bat.record("torsion-free", check_torsion_free(M, rng), tol)
        bat.record("metric-compatibility", check_metric_compatible(M, rng), tol)
        sym, bianchi = check_curvature_symmetries(M, rng)
        bat.record("curvature-symmetry", sym, tol)
        bat.record("first-bianchi", bianchi, tol)
        bat.record("dual-ricci", check_dual_ricci(M), tol)
        d = decomp.decompose(M, eps)
        for k, v in check_specialized(M, d, rng).items():
            bat.record(f"specialized-{k}", v, tol)
        for k, v in check_decomposition_laws(M, d).items():
            bat.record(f"decomposition-{k}", v, tol)
    for inst in insts[: max(1, trials // 4)]:
        eq = check_oracle_equivariance(inst.M, rng, eps=eps)
        for k in ("frame_verdict_mismatch", "frame_c", "scale_verdict_mismatch", "scale_c"):
            bat.record(f"oracle-{k}", eq[k], tol if k.endswith("_c") else 0.0)
    one = catalog_instances(rng, max(8, trials // 2), ONE_DIM_FAMILIES)
    t = tally_theorem21(one, eps)
    bat.record("theorem21-nonunimodular-disagreements", t.nonunimodular - t.nonunimodular_agree, 0.0)
    bat.record("theorem21-corrected-disagreements", t.unimodular - t.unimodular_agree, 0.0)
    bat.record("theorem21-c-mismatch", t.c_mismatch, 1e-8)
    bat.record("theorem21-literal-count-mismatch",
               abs(t.literal_disagreements - t.unimodular_solitons_c_nonzero), 0.0)
    return bat
