import math

import numpy as np
import pytest
import scipy.sparse as sp

from linalg.norms import estimate_spectral_norm, inv_norm_of_M, power_iteration, spectral_norm
from linalg.sparse import SparseMatrix
from linalg.splitting import Splitting, split
from model.generators import generate_example_4_1


class TestSpectralNorm:
    def test_zero_matrix(self):
        assert spectral_norm(SparseMatrix.from_dense(np.zeros((3, 3)))) == 0.0

    def test_tridiagonal(self):
        mx = SparseMatrix.from_scipy(sp.diags([-1.0, 8.0, -1.0], [-1, 0, 1], shape=(3, 3)))
        assert spectral_norm(mx) == pytest.approx(8.0 + math.sqrt(2.0), abs=1e-8)

    def test_diagonal_is_exact(self):
        estimate = estimate_spectral_norm(SparseMatrix.from_dense(np.diag([1.0, -5.0, 3.0])))
        assert estimate.value == 5.0
        assert estimate.iterations == 0

    @pytest.mark.parametrize("n", [5, 20, 50])
    def test_matches_dense_svd(self, rng, n):
        dense = rng.standard_normal((n, n))
        expected = np.linalg.norm(dense, 2)
        assert spectral_norm(SparseMatrix.from_dense(dense)) == pytest.approx(expected, rel=1e-6)

    def test_iteration_cap_is_reported(self, rng):
        dense = rng.standard_normal((20, 20))
        estimate = estimate_spectral_norm(SparseMatrix.from_dense(dense), tol=1e-300, max_iter=3)
        assert not estimate.converged
        assert estimate.iterations == 3
        assert "cap" in estimate.warning("||N||")

    def test_power_iteration_on_explicit_gram(self):
        gram = np.diag([9.0, 4.0, 1.0])
        estimate = power_iteration(lambda x: gram @ x, 3)
        assert estimate.value == pytest.approx(3.0, rel=1e-8)


class TestInverseNorm:
    def test_jacobi_of_example(self):
        pair = generate_example_4_1(10)
        c = pair.A.combine(np.full(10, 5.0), pair.B)
        assert inv_norm_of_M(split(c, Splitting.jacobi())) == pytest.approx(1.0 / 28.0, rel=1e-15)

    def test_lower_triangular(self):
        plan = split(SparseMatrix.from_dense([[2.0, 0.0], [-1.0, 2.0]]), Splitting.gauss_seidel())
        value = inv_norm_of_M(plan)
        assert value == pytest.approx(np.linalg.norm(np.linalg.inv(plan.M.toarray()), 2), rel=1e-8)
        assert value == pytest.approx(0.6404, abs=1e-4)

    def test_sor_matches_dense(self, rng):
        dense = rng.uniform(-0.5, 0.5, (15, 15)) + np.diag(rng.uniform(4.0, 8.0, 15))
        plan = split(SparseMatrix.from_dense(dense), Splitting.sor(1.2))
        expected = np.linalg.norm(np.linalg.inv(plan.M.toarray()), 2)
        assert inv_norm_of_M(plan) == pytest.approx(expected, rel=1e-6)
