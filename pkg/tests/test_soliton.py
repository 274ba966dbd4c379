import numpy as np
import pytest

from metriclie import catalog, decomp, numkit, soliton
from metriclie.geom import MetricLieAlgebra
from metriclie.liealg import LieAlgebra, is_derivation
from metriclie.soliton import Method, SolitonClass


class TestOracle:
    def test_abelian(self):
        v = soliton.oracle_solve(MetricLieAlgebra(LieAlgebra.abelian(3)))
        assert v.is_soliton and v.c == 0 and v.soliton_class is SolitonClass.STEADY
        assert np.all(v.D == 0)

    def test_heisenberg(self, h3):
        v = soliton.oracle_solve(h3)
        assert v.is_soliton and v.c == pytest.approx(-1.5)
        assert v.soliton_class is SolitonClass.EXPANDING
        assert np.allclose(v.D, np.diag([2.0, 1.0, 1.0]))
        assert v.derivation_residual <= 1e-9

    def test_example1_conflicting_pairs(self, ex1):
        v = soliton.oracle_solve(ex1)
        assert not v.is_soliton
        by_pair = {pc.pair: pc.candidate for pc in v.c_constraints}
        assert by_pair[(2, 3)] == pytest.approx(-2.0)     # (X3, X4)
        assert by_pair[(3, 4)] == pytest.approx(-2.5)     # (X4, X5)
        assert v.candidates() == pytest.approx([-2.5, -2.0])

    def test_soliton_derivation_holds(self, rng):
        for spec in (catalog.heisenberg(1, 2), catalog.affine(0), catalog.heisenberg(2, 0)):
            v = soliton.oracle_solve(catalog.build(spec))
            assert v.is_soliton
            L = catalog.algebra(spec)
            assert is_derivation(L, v.D).residual <= 1e-9

    def test_affine_product_needs_f_zero(self, rng):
        G = np.eye(3)
        G[0, 2] = G[2, 0] = 0.3
        v = soliton.oracle_solve(MetricLieAlgebra(catalog.algebra(catalog.affine(1)), G))
        d = decomp.decompose(MetricLieAlgebra(catalog.algebra(catalog.affine(1)), G))
        assert v.is_soliton == bool(numkit.is_zero(d.f))


class TestClassify:
    @pytest.mark.parametrize("c,want", [(-1.0, SolitonClass.EXPANDING), (0.0, SolitonClass.STEADY),
                                        (0.5, SolitonClass.SHRINKING)])
    def test_examples(self, c, want):
        assert soliton.classify(c) is want


class TestCrossValidate:
    def test_affine_all_agree(self, affine1):
        cr = soliton.cross_validate(affine1)
        assert cr.discrepancies == ()
        for v in cr.methods.values():
            assert v.is_soliton and v.c == pytest.approx(-1.0)

    def test_heisenberg_single_discrepancy(self, h3):
        cr = soliton.cross_validate(h3)
        assert len(cr.discrepancies) == 1
        x = cr.discrepancies[0]
        assert x.method == Method.THEOREM21.value and x.against == Method.ORACLE.value
        assert cr.methods[Method.THEOREM21_CORRECTED.value].c == pytest.approx(-1.5)

    def test_example2_no_discrepancy(self, ex2):
        cr = soliton.cross_validate(ex2)
        assert cr.discrepancies == ()
        assert not cr.oracle.is_soliton and not cr.methods["Theorem32"].is_soliton

    def test_heisenberg_pair_corollary(self):
        J = np.array([[0.0, -1.0], [1.0, 0.0]])
        z = np.zeros((2, 2))
        L = catalog.two_step_nilpotent(np.block([[J, z], [z, z]]), np.block([[z, z], [z, J]]))
        cr = soliton.cross_validate(MetricLieAlgebra(L))
        assert cr.oracle.is_soliton and cr.oracle.c == pytest.approx(-1.5)
        assert cr.methods["Theorem32"].is_soliton and cr.methods["Corollary"].is_soliton
        # the literal asymmetric form rejects this nilsoliton
        assert not cr.methods["CorollaryLiteral"].is_soliton
        assert [x.method for x in cr.discrepancies] == ["CorollaryLiteral"]

    def test_remixing_e1_e2_keeps_verdict(self, rng):
        J = np.array([[0.0, -1.0], [1.0, 0.0]])
        z = np.zeros((2, 2))
        L = catalog.two_step_nilpotent(np.block([[J, z], [z, z]]), np.block([[z, z], [z, J]]))
        for M in (MetricLieAlgebra(L), catalog.build(catalog.indecomp5p2k(0))):
            base = soliton.theorem_verdicts(decomp.decompose(M))[0][Method.THEOREM32]
            for _ in range(5):
                R = numkit.random_orthogonal(rng, 2)
                v = soliton.theorem_verdicts(decomp.decompose(M, e_rotation=R))[0][Method.THEOREM32]
                assert v.is_soliton == base.is_soliton
                if base.is_soliton:
                    assert v.c == pytest.approx(base.c)
