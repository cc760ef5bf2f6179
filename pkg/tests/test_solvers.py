import numpy as np
import pytest

from linalg.splitting import Splitting
from model.instance import OmegaChoice, reformulation_residual
from solvers.fpi import FixedPointIteration, fpi_solve, fpi_state, fpi_step
from solvers.modulus import nms_solve
from solvers.report import SolveStatus, SolverConfig, method_label
from utils.errors import InvalidParameter


def _config(n, splitting=None, tau=None, omega=5.0, **kwargs):
    return SolverConfig(splitting=splitting or Splitting.gauss_seidel(),
                        omega=OmegaChoice.scalar(omega, n), tau=tau, **kwargs)


class TestSolverConfig:
    def test_defaults(self):
        config = _config(3)
        assert config.tol == 1e-8
        assert config.max_iter == 1000
        np.testing.assert_array_equal(config.start_vector(3), np.ones(3))

    @pytest.mark.parametrize("kwargs", [{"tau": 0.0}, {"tau": -1.0}, {"tol": 0.0}, {"max_iter": 0}])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParameter):
            _config(3, **kwargs)

    def test_x0_length(self):
        with pytest.raises(InvalidParameter):
            _config(3, x0=np.ones(2)).start_vector(3)

    def test_method_labels(self):
        assert method_label("fpi", Splitting.gauss_seidel(), 0.95) == "FPI-GS(tau=0.95)"
        assert method_label("nms", Splitting.sor(0.8)) == "NMSOR(alpha=0.8)"
        assert method_label("nms", Splitting.jacobi()) == "NMJ"
        assert method_label("fpi", Splitting.sor(1.05), 1.01) == "FPI-SOR(tau=1.01,alpha=1.05)"


class TestFixedPointStep:
    def test_scalar_step(self, scalar_instance):
        config = _config(1, Splitting.jacobi(), tau=1.0, omega=1.0)
        state = fpi_state(scalar_instance, config, [1.0])
        assert state.y[0] == 1.0
        nxt = fpi_step(scalar_instance, state, config)
        assert nxt.x[0] == pytest.approx(1.0 / 3.0, rel=1e-15)
        assert nxt.y[0] == pytest.approx(1.0 / 3.0, rel=1e-15)
        assert nxt.iteration == 1

    def test_scalar_step_with_relaxation(self, scalar_instance):
        config = _config(1, Splitting.jacobi(), tau=0.5, omega=1.0)
        nxt = fpi_step(scalar_instance, fpi_state(scalar_instance, config, [1.0]), config)
        assert nxt.x[0] == pytest.approx(1.0 / 3.0, rel=1e-15)
        assert nxt.y[0] == pytest.approx(2.0 / 3.0, rel=1e-15)

    def test_scalar_converges_to_zero(self, scalar_instance):
        report = fpi_solve(scalar_instance, _config(1, Splitting.jacobi(), tau=1.0, omega=1.0))
        assert report.status is SolveStatus.CONVERGED
        assert abs(report.x_final[0]) < 1e-4
        assert report.final_residual < 1e-8
        assert report.iterations == len(report.residual_history) - 1

    def test_solution_is_a_fixed_point(self, example_41_small):
        inst = example_41_small(30, "sin", "cos")
        config = _config(30, tau=1.04)
        state = fpi_state(inst, config, np.zeros(30))
        np.testing.assert_allclose(state.y, np.full(30, 5.0))
        nxt = fpi_step(inst, state, config)
        np.testing.assert_allclose(nxt.x, state.x, atol=1e-12)
        np.testing.assert_allclose(nxt.y, state.y, rtol=1e-12)

    def test_tau_is_required(self, scalar_instance):
        with pytest.raises(InvalidParameter):
            FixedPointIteration(scalar_instance, _config(1))

    def test_omega_dimension(self, example_41_small):
        with pytest.raises(InvalidParameter):
            fpi_solve(example_41_small(10), _config(5, tau=1.0))


class TestModulusStep:
    def test_scalar_step(self, scalar_instance):
        report = nms_solve(scalar_instance, _config(1, Splitting.jacobi(), omega=1.0, max_iter=1))
        assert report.x_final[0] == pytest.approx(1.0 / 3.0, rel=1e-15)
        assert report.status is SolveStatus.MAX_ITER_REACHED
        assert report.y_final is None

    def test_fpi_with_unit_tau_reproduces_modulus_iteration(self, example_41_small):
        inst = example_41_small(40, "abs", "sin")
        fpi = fpi_solve(inst, _config(40, Splitting.jacobi(), tau=1.0))
        nms = nms_solve(inst, _config(40, Splitting.jacobi()))
        assert fpi.iterations == nms.iterations
        np.testing.assert_allclose(fpi.residual_history, nms.residual_history, rtol=1e-12, atol=0)


class TestStoppingRules:
    @pytest.mark.parametrize("splitting", [Splitting.jacobi(), Splitting.gauss_seidel(), Splitting.sor(1.05)])
    def test_example_converges(self, example_41_small, splitting):
        report = fpi_solve(example_41_small(100), _config(100, splitting, tau=0.95))
        assert report.converged
        assert report.final_residual < 1e-8
        assert report.min_u > -1e-3
        assert report.min_v > -1e-3

    def test_max_iter_reached(self, example_41_small):
        report = fpi_solve(example_41_small(50), _config(50, tau=1.0, max_iter=1))
        assert report.status is SolveStatus.MAX_ITER_REACHED
        assert report.iterations == 1
        assert len(report.residual_history) == 2

    def test_diverges_for_large_tau(self, example_41_small):
        report = fpi_solve(example_41_small(50), _config(50, tau=50.0))
        assert report.status is SolveStatus.DIVERGED
        assert report.iterations < 1000

    def test_evaluation_error_at_start(self, example_41_small):
        inst = example_41_small(10, "rational", "abs")
        report = fpi_solve(inst, _config(10, tau=1.0, x0=-np.ones(10)))
        assert report.status is SolveStatus.EVALUATION_ERROR
        assert report.residual_history == []
        assert report.iterations == 0
        assert "pole" in report.message

    def test_already_converged_start(self, example_41_small):
        report = nms_solve(example_41_small(10), _config(10, x0=np.zeros(10)))
        assert report.converged
        assert report.iterations == 0
        assert report.residual_history == [0.0]

    def test_runs_are_deterministic(self, example_41_small):
        inst = example_41_small(200, "sin", "rational")
        first = fpi_solve(inst, _config(200, tau=0.95))
        second = fpi_solve(inst, _config(200, tau=0.95))
        assert first.residual_history == second.residual_history
        np.testing.assert_array_equal(first.x_final, second.x_final)


class TestReformulationConsistency:
    def test_converged_solve_satisfies_modulus_equation(self, example_41_small):
        inst = example_41_small(1000, "sin", "cos")
        config = _config(1000, Splitting.gauss_seidel(), tau=1.04)
        report = fpi_solve(inst, config)
        assert report.converged
        assert report.final_residual < 1e-8
        assert reformulation_residual(inst, config.omega, report.x_final) < 1e-6
        assert report.min_u > -1e-6
        assert report.min_v > -1e-6

    def test_degenerate_solution_leaves_larger_modulus_residual(self, example_41_small):
        # u and v both vanish at x* = 0, so RES shrinks like the square of the error
        inst = example_41_small(1000, "abs", "abs")
        config = _config(1000, Splitting.gauss_seidel(), tau=0.95)
        report = fpi_solve(inst, config)
        assert report.converged
        reform = reformulation_residual(inst, config.omega, report.x_final)
        assert reform < 1e-3
        assert reform <= 100.0 * np.sqrt(report.final_residual)


class TestSplittingEquivalences:
    def test_sor_with_unit_relaxation_matches_gauss_seidel(self, example_41_small):
        inst = example_41_small(50, "abs", "cos")
        gs = fpi_solve(inst, _config(50, Splitting.gauss_seidel(), tau=0.95))
        sor = fpi_solve(inst, _config(50, Splitting.sor(1.0), tau=0.95))
        assert gs.iterations == sor.iterations
        np.testing.assert_allclose(gs.residual_history, sor.residual_history, rtol=1e-12, atol=0)

    def test_jacobi_commutes_with_permutation(self, example_41_small, rng):
        n = 20
        inst = example_41_small(n, "sin", "abs")
        perm = rng.permutation(n)
        permuted = type(inst)(inst.A.permuted(perm), inst.B.permuted(perm), inst.phi, inst.psi, "permuted")
        x0 = rng.uniform(0.5, 1.5, n)

        plain = FixedPointIteration(inst, _config(n, Splitting.jacobi(), tau=0.9))
        swapped = FixedPointIteration(permuted, _config(n, Splitting.jacobi(), tau=0.9))
        state = plain.initial_state(x0)
        state_p = swapped.initial_state(x0[perm])
        for _ in range(5):
            state = plain.step(state)
            state_p = swapped.step(state_p)
            np.testing.assert_allclose(state_p.x, state.x[perm], rtol=0, atol=1e-12)
            np.testing.assert_allclose(state_p.y, state.y[perm], rtol=0, atol=1e-12)
