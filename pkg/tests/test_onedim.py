import numpy as np
import pytest

from metriclie import catalog, decomp, onedim
from metriclie.errors import NonOrthonormalInput, WrongKind
from metriclie.onedim import Verdict1D


@pytest.fixture
def dh3(h3):
    return decomp.decompose(h3)


@pytest.fixture
def daff(affine1):
    return decomp.decompose(affine1)


class TestConnection:
    def test_nabla_e_e_is_a(self, daff):
        assert np.allclose(onedim.connection_1d(daff, [1, 0], [1, 0]), [0, 1])

    def test_abelian_direction(self):
        d = decomp.decompose(catalog.build(catalog.heisenberg(1, 1)))
        w = np.eye(4)[3]
        assert np.all(onedim.connection_1d(d, np.eye(4)[0], w) == 0)

    def test_heisenberg_u_e(self, dh3):
        assert np.allclose(onedim.connection_1d(dh3, [0, 1, 0], [1, 0, 0]), [0, 0, -0.5])

    def test_wrong_kind(self, ex1):
        with pytest.raises(WrongKind):
            onedim.connection_1d(decomp.decompose(ex1), np.eye(5)[0], np.eye(5)[1])


class TestSectional:
    def test_heisenberg(self, dh3):
        assert onedim.sectional_1d(dh3, [1, 0]) == pytest.approx(0.25)
        assert onedim.sectional_1d(dh3, [1, 0], [0, 1]) == pytest.approx(-0.75)

    def test_affine_hyperbolic(self, daff):
        assert onedim.sectional_1d(daff, [1.0]) == pytest.approx(-1.0)

    def test_non_orthonormal(self, dh3):
        with pytest.raises(NonOrthonormalInput):
            onedim.sectional_1d(dh3, [1, 0], [1, 1])
        with pytest.raises(NonOrthonormalInput):
            onedim.sectional_1d(dh3, [2, 0])


class TestRicci:
    def test_heisenberg(self, dh3):
        r = onedim.ricci_1d(dh3)
        assert np.allclose(r.ric_e, [0.5, 0, 0])
        assert np.allclose(r.operator, np.diag([0.5, -0.5, -0.5]))

    def test_affine_einstein(self, daff):
        assert np.allclose(onedim.ricci_1d(daff).operator, -np.eye(2))

    def test_zero_invariants(self):
        d = decomp.from_invariants(a=np.zeros(3), f=np.zeros((3, 3)))
        assert np.all(onedim.ricci_1d(d).operator == 0)


class TestTheorem21:
    def test_affine_case_ii(self, daff):
        r = onedim.theorem21_classify(daff)
        assert r.paper_verdict is Verdict1D.CASE_II and r.paper_c == pytest.approx(-1.0)
        assert r.corrected_soliton and r.corrected_c == pytest.approx(-1.0)

    def test_heisenberg_literal_fails(self, dh3):
        r = onedim.theorem21_classify(dh3)
        assert r.paper_verdict is Verdict1D.NONE
        assert r.corrected_soliton and r.corrected_c == pytest.approx(-1.5)

    def test_flat_case_i(self):
        r = onedim.theorem21_classify(decomp.from_invariants(a=np.zeros(2), f=np.zeros((2, 2))))
        assert r.paper_verdict is Verdict1D.CASE_I and r.paper_c == 0

    def test_unequal_blocks_not_soliton(self):
        f = np.zeros((4, 4))
        f[0, 1], f[1, 0], f[2, 3], f[3, 2] = -1, 1, -2, 2
        r = onedim.theorem21_classify(decomp.from_invariants(a=np.zeros(4), f=f))
        assert not r.corrected_soliton and r.paper_verdict is Verdict1D.NONE

    def test_non_unimodular_needs_a_in_kernel(self):
        f = np.zeros((3, 3))
        f[0, 1], f[1, 0] = -1, 1
        d = decomp.from_invariants(a=np.array([1.0, 0, 0]), f=f)
        assert onedim.theorem21_classify(d).paper_verdict is Verdict1D.NONE
        # a in ker f; case (ii) then needs f^3 = -(2|a|^2 + tr(f^2)/4) f, i.e. lam^2 = 4/3
        from metriclie import soliton
        for lam, want in ((1.0, False), (np.sqrt(4 / 3), True)):
            d = decomp.from_invariants(a=np.array([0, 0, 1.0]), f=lam * f)
            r = onedim.theorem21_classify(d)
            assert r.paper_soliton is want
            assert soliton.oracle_solve(d.frame_metric()).is_soliton is want
            if want:
                assert r.paper_c == pytest.approx(-1.0)

    def test_scaled_heisenberg(self):
        d = decomp.decompose(catalog.build(catalog.heisenberg(lam=2.0)))
        assert onedim.theorem21_classify(d).corrected_c == pytest.approx(-6.0)
