import numpy as np
import pytest

from metriclie import numkit
from metriclie.errors import DependentInput, DimensionMismatch, NonFiniteValue
from metriclie.numkit import Solution


class TestGramSchmidt:
    def test_standard_basis_unchanged(self):
        out = numkit.gram_schmidt(list(np.eye(3)))
        assert np.allclose(np.array(out), np.eye(3))

    def test_normalizes(self):
        (w,) = numkit.gram_schmidt([np.array([2.0, 0.0])])
        assert np.allclose(w, [1.0, 0.0])

    def test_metric_normalization(self):
        G = np.diag([4.0, 1.0])
        (w,) = numkit.gram_schmidt([np.array([1.0, 0.0])], G)
        assert np.allclose(w, [0.5, 0.0])
        assert numkit.inner(w, w, G) == pytest.approx(1.0)

    def test_dependent_input(self):
        with pytest.raises(DependentInput):
            numkit.gram_schmidt([np.array([1.0, 1.0]), np.array([2.0, 2.0])])

    def test_orthonormal_under_random_spd(self, rng):
        for n in (2, 5, 9):
            G = numkit.random_spd(rng, n, 1e3)
            W = np.array(numkit.gram_schmidt(list(rng.standard_normal((n, n))), G))
            assert np.max(np.abs(W @ G @ W.T - np.eye(n))) <= 1e-9


class TestSolveForScalar:
    def test_unique(self):
        s = numkit.solve_for_scalar([(np.array([1.0, 0.0]), np.array([-2.0, 0.0]))])
        assert s.kind is Solution.UNIQUE and s.c == pytest.approx(-2.0)

    def test_underdetermined(self):
        s = numkit.solve_for_scalar([(np.zeros(2), np.zeros(2))])
        assert s.kind is Solution.UNDERDETERMINED

    def test_infeasible(self):
        s = numkit.solve_for_scalar([(np.array([1.0, 0.0]), np.array([-2.0, 0.0])),
                                     (np.array([0.0, 1.0]), np.array([0.0, -2.5]))])
        assert s.kind is Solution.INFEASIBLE

    def test_zero_lhs_nonzero_rhs_is_infeasible(self):
        s = numkit.solve_for_scalar([(np.zeros(2), np.array([0.0, 1.0]))])
        assert s.kind is Solution.INFEASIBLE

    def test_unique_solution_satisfies_all(self, rng):
        for _ in range(20):
            c = rng.normal()
            cons = [(v, c * v) for v in rng.standard_normal((4, 3))]
            s = numkit.solve_for_scalar(cons)
            assert s.kind is Solution.UNIQUE
            assert max(np.max(np.abs(s.c * l - r)) for l, r in cons) <= 1e-9


class TestSpd:
    @pytest.mark.parametrize("G,ok", [
        (np.eye(3), True),
        (np.diag([1.0, -1.0]), False),
        (np.array([[2.0, 1.0], [1.0, 2.0]]), True),
        (np.array([[1.0, 2.0], [2.0, 1.0]]), False),
    ])
    def test_examples(self, G, ok):
        assert numkit.spd_check(G) is ok

    def test_failure_names_minor(self):
        msg = numkit.spd_failure(np.diag([1.0, -1.0, 1.0]))
        assert "minor" in msg and "2" in msg

    def test_asymmetric_rejected(self):
        assert not numkit.spd_check(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_permutation_congruence(self, rng):
        for _ in range(10):
            G = numkit.random_spd(rng, 4) if rng.random() < 0.5 else rng.standard_normal((4, 4))
            G = 0.5 * (G + G.T)
            P = np.eye(4)[rng.permutation(4)]
            assert numkit.spd_check(G) == numkit.spd_check(P.T @ G @ P)


class TestHelpers:
    def test_hybrid_close(self):
        assert numkit.close(1e6, 1e6 + 1e-4)
        assert not numkit.close(0.0, 1e-6)

    def test_as_vec_rejects_nan(self):
        with pytest.raises(NonFiniteValue):
            numkit.as_vec([1.0, np.nan])

    def test_as_vec_shape(self):
        with pytest.raises(DimensionMismatch):
            numkit.as_vec([1.0, 2.0], 3)

    def test_random_spd_condition(self, rng):
        G = numkit.random_spd(rng, 6, 1e3)
        ev = np.linalg.eigvalsh(G)
        assert ev.min() > 0 and ev.max() / ev.min() <= 1e3 * (1 + 1e-9)
