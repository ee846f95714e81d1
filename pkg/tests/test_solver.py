import dataclasses
import math

import numpy as np
import pytest

from cfcalc.errors import CompatibilityViolation, NonConvergence, WindowViolation
from cfcalc.operators import FracOrder, SampledFunction, cf_derivative, cf_integral
from cfcalc.solver import (
    IVP,
    SolverConfig,
    contraction_factor,
    contraction_window,
    segment_join_check,
    solve_global,
    solve_local,
)


def square_rhs(t, x):
    # D^0.5 t^2 = 4t - 4(1 - e^-t), so f = t^2 solves D^0.5 f = 0.5 f + g
    return 0.5 * x + 4 * t - 4 * (1 - np.exp(-t)) - 0.5 * t**2


SQUARE = IVP(square_rhs, 0.0, 0.0, 0.5, FracOrder(0.5))


def exp_rhs(t, x):
    exact = np.exp(t) - 1
    return np.exp(t) - np.exp(-t) + 0.9 * (x - exact)


EXP = IVP(exp_rhs, 0.0, 0.0, 0.9, FracOrder(0.5))


def zero_rhs(t, x):
    return 0.0 * x


class TestWindow:
    def test_examples(self):
        assert contraction_window(0.5, 0.5) == 3.0
        assert contraction_window(0.9, 1.0) == pytest.approx(1.0, rel=1e-15)
        assert contraction_window(0.5, 0.0) == math.inf

    @pytest.mark.parametrize("alpha, L", [(0.5, 2.0), (0.5, 3.0), (0.9, 10.5)])
    def test_violation(self, alpha, L):
        with pytest.raises(WindowViolation):
            contraction_window(alpha, L)

    def test_factor_below_one_inside_window(self):
        w = contraction_window(0.3, 1.2)
        assert contraction_factor(0.3, 1.2, 0.999 * w) < 1.0
        assert contraction_factor(0.3, 1.2, w) == pytest.approx(1.0)


class TestConfig:
    @pytest.mark.parametrize("kw", [dict(dt_grid=0.0), dict(segment_fraction=0.0), dict(segment_fraction=1.0),
                                    dict(picard_tol=0.0), dict(max_picard_iters=0), dict(compat_tol=-1.0)])
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            SolverConfig(**kw)

    def test_ivp_rejects_negative_lipschitz(self):
        with pytest.raises(ValueError):
            IVP(zero_rhs, 0.0, 0.0, -1.0, FracOrder(0.5))


class TestLocal:
    def test_zero_rhs(self):
        traj = solve_local(IVP(zero_rhs, 0.0, 7.0, 0.5, FracOrder(0.5)), 1.0)
        assert np.all(traj.values == 7.0)
        assert traj.picard_iters == [1]

    def test_x_independent_rhs_is_one_application(self):
        ivp = IVP(lambda t, x: np.sin(t) + 0 * x, 0.0, 2.0, 0.0, FracOrder(0.4))
        traj = solve_local(ivp, 3.0, SolverConfig(dt_grid=1e-2))
        assert traj.picard_iters == [1]
        g = cf_integral(SampledFunction.from_callable(np.sin, traj.grid), 0.4).values
        np.testing.assert_allclose(traj.values, 2.0 + g, rtol=0, atol=1e-14)

    def test_manufactured(self):
        traj = solve_local(SQUARE, 1.0, SolverConfig(dt_grid=1e-3, picard_tol=1e-12))
        assert traj.values[0] == 0.0
        assert np.max(np.abs(traj.values - traj.t**2)) <= 1e-5

    def test_horizon_beyond_window(self):
        with pytest.raises(WindowViolation):
            solve_local(SQUARE, 3.0)

    def test_step_must_divide(self):
        with pytest.raises(ValueError):
            solve_local(SQUARE, 1.0, SolverConfig(dt_grid=0.3))

    def test_nonconvergence(self):
        with pytest.raises(NonConvergence):
            solve_local(SQUARE, 1.0, SolverConfig(max_picard_iters=3))


class TestCompatibility:
    def test_violation(self):
        ivp = IVP(lambda t, x: 1.0 + 0 * x, 0.0, 0.0, 0.0, FracOrder(0.5))
        with pytest.raises(CompatibilityViolation):
            solve_global(ivp, 1.0)

    def test_auto_correct_solves_shifted_equation(self):
        ivp = IVP(lambda t, x: 1.0 + 0 * x, 0.0, 0.0, 0.0, FracOrder(0.5))
        traj = solve_global(ivp, 2.0, SolverConfig(dt_grid=1e-3, auto_correct=True))
        assert traj.compat_shift == 1.0
        assert "corrected equation" in traj.note
        # D^0.5 f = 1 - e^-t: f = (1 - 0.5)(1 - e^-t) + 0.5 (t - 1 + e^-t)
        t = traj.t
        exact = 0.5 * (1 - np.exp(-t)) + 0.5 * (t - 1 + np.exp(-t))
        assert np.max(np.abs(traj.values - exact)) <= 1e-6

    def test_rounding_slack(self):
        ivp = IVP(lambda t, x: 1e-13 + 0 * x, 0.0, 0.0, 0.0, FracOrder(0.5))
        solve_global(ivp, 1.0, SolverConfig(dt_grid=1e-2))


class TestGlobal:
    def test_manufactured(self):
        traj = solve_global(SQUARE, 5.0, SolverConfig(dt_grid=1e-3))
        assert traj.n_segments >= 2
        np.testing.assert_allclose(traj.segment_boundaries, [1.5, 3.0, 4.5])
        assert np.max(np.abs(traj.values - traj.t**2)) <= 1e-4
        assert segment_join_check(traj, SQUARE) <= 1e-4

    def test_exponential(self):
        traj = solve_global(EXP, 4.0, SolverConfig(dt_grid=1e-3))
        assert traj.n_segments >= 4
        assert np.max(np.abs(traj.values - (np.exp(traj.t) - 1))) <= 1e-4

    def test_zero_rhs(self):
        ivp = IVP(zero_rhs, 1.0, -3.0, 0.5, FracOrder(0.5))
        traj = solve_global(ivp, 10.0, SolverConfig(dt_grid=1e-2))
        assert traj.n_segments > 1
        assert np.all(traj.values == -3.0)
        assert segment_join_check(traj, ivp) == 0.0

    def test_single_segment_join_is_vacuous(self):
        traj = solve_global(SQUARE, 1.0)
        assert traj.segment_boundaries.size == 0
        assert segment_join_check(traj, SQUARE) == 0.0

    def test_trajectory_invariants(self):
        traj = solve_global(EXP, 4.0, SolverConfig(dt_grid=1e-3))
        window = contraction_window(EXP.order, EXP.L)
        b = np.concatenate([[EXP.a], traj.segment_boundaries, [4.0]])
        assert traj.values[0] == EXP.a0
        assert np.all(np.diff(b) > 0) and np.all(np.diff(b) < window)
        assert np.all(np.diff(traj.segment) >= 0)
        assert traj.segment[-1] == traj.n_segments - 1

    def test_equals_local_on_short_horizon(self):
        cfg = SolverConfig(dt_grid=1e-3)
        g = solve_global(SQUARE, 1.0, cfg)
        loc = solve_local(SQUARE, 1.0, cfg)
        np.testing.assert_array_equal(g.values, loc.values)

    def test_constant_rhs_free_of_x_uses_capped_segments(self):
        ivp = IVP(lambda t, x: np.sin(t) + 0 * x, 0.0, 0.0, 0.0, FracOrder(0.5))
        traj = solve_global(ivp, 25.0, SolverConfig(dt_grid=1e-2))
        assert traj.n_segments == 3
        assert all(i == 1 for i in traj.picard_iters)
        assert traj.max_residual <= 1e-3

    def test_rejects_empty_horizon(self):
        with pytest.raises(ValueError):
            solve_global(SQUARE, 0.0)

    def test_rejects_large_lipschitz(self):
        with pytest.raises(WindowViolation):
            solve_global(dataclasses.replace(SQUARE, L=2.0), 1.0)


class TestContraction:
    @pytest.mark.parametrize("ivp, t_end", [(SQUARE, 5.0), (EXP, 4.0)])
    def test_certificate(self, ivp, t_end):
        cfg = SolverConfig(dt_grid=1e-3)
        traj = solve_global(ivp, t_end, cfg)
        for q, changes, iters in zip(traj.contraction_factors, traj.picard_changes, traj.picard_iters):
            assert q < 1.0
            noise = 1e3 * np.finfo(float).eps * max(1.0, np.max(np.abs(traj.values)))
            for k in range(3, len(changes)):
                if changes[k] > noise:
                    assert changes[k] / changes[k - 1] <= q * 1.05
            bound = math.ceil(math.log(cfg.picard_tol / changes[0]) / math.log(q)) + 2
            assert iters <= bound


class TestResidual:
    def test_second_order(self):
        res = [solve_global(SQUARE, 5.0, SolverConfig(dt_grid=dt)).max_residual
               for dt in (4e-3, 2e-3, 1e-3)]
        orders = [math.log2(res[i] / res[i + 1]) for i in range(2)]
        assert min(orders) >= 1.9

    def test_history_matters(self):
        traj = solve_global(SQUARE, 5.0, SolverConfig(dt_grid=1e-3))
        t1 = traj.segment_boundaries[0]
        i1 = int(round(t1 / traj.grid.dt))
        bumped = traj.values.copy()
        bumped[i1 // 4:i1 // 2] += 1e-3
        before = cf_derivative(SampledFunction(traj.grid, traj.values), SQUARE.order).values[i1]
        after = cf_derivative(SampledFunction(traj.grid, bumped), SQUARE.order).values[i1]
        assert bumped[i1] == traj.values[i1]
        assert abs(after - before) > 1e-6
        altered = dataclasses.replace(traj, values=bumped)
        assert segment_join_check(altered, SQUARE) != segment_join_check(traj, SQUARE)
