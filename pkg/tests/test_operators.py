import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cfcalc.errors import DomainError, GridError
from cfcalc.operators import (
    ALPHA_MAX,
    FracOrder,
    SampledFunction,
    UniformGrid,
    cf_derivative,
    cf_derivative_higher,
    cf_integral,
    nth_difference,
    translate_lower_limit,
)
from cfcalc.oracle import OracleSpec, oracle_shifted

from conftest import max_err

E_MINUS_INV_E = 2.3504023872876029138  # e - 1/e


def direct_cf_derivative(values, dt, alpha):
    """O(n^2) evaluation of the same piecewise-linear scheme, panel by panel."""
    lam = alpha / (1 - alpha)
    t = dt * np.arange(len(values))
    slopes = np.diff(values) / dt
    out = np.zeros(len(values))
    for j in range(1, len(values)):
        left, right = t[:j], t[1:j + 1]
        out[j] = np.sum(slopes[:j] * (np.exp(-lam * (t[j] - right)) - np.exp(-lam * (t[j] - left))) / lam)
    return out / (1 - alpha)


class TestTypes:
    def test_frac_order_rate(self):
        o = FracOrder(0.75)
        assert o.lam == 0.75 / 0.25

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1, 1.5, ALPHA_MAX + 5e-9])
    def test_frac_order_rejects(self, alpha):
        with pytest.raises(DomainError):
            FracOrder(alpha)

    def test_frac_order_accepts_cap(self):
        assert math.isfinite(FracOrder(ALPHA_MAX).lam)

    def test_grid(self):
        g = UniformGrid.from_step(0.0, 1.0, 0.25)
        assert g.n == 4 and len(g) == 5
        np.testing.assert_allclose(g.nodes, [0, 0.25, 0.5, 0.75, 1.0])

    @pytest.mark.parametrize("a, dt, n", [(0.0, 0.0, 3), (0.0, -1.0, 3), (0.0, 0.1, 0)])
    def test_grid_rejects(self, a, dt, n):
        with pytest.raises(GridError):
            UniformGrid(a, dt, n)

    def test_grid_step_must_divide(self):
        with pytest.raises(GridError):
            UniformGrid.from_step(0.0, 1.0, 0.3)

    def test_sampled_function_checks(self):
        g = UniformGrid(0.0, 0.5, 2)
        with pytest.raises(GridError):
            SampledFunction(g, [1.0, 2.0])
        with pytest.raises(DomainError):
            SampledFunction(g, [1.0, np.nan, 2.0])

    def test_sampled_function_is_read_only(self):
        f = SampledFunction(UniformGrid(0.0, 0.5, 2), [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            f.values[0] = 5.0


class TestDerivative:
    def test_constant_gives_zero(self, sample):
        for alpha in (0.1, 0.5, 0.9):
            d = cf_derivative(sample(lambda t: 3.7 + 0 * t, 0.0, 2.0, 0.01), alpha)
            assert np.all(d.values == 0.0)

    def test_exponential(self, sample):
        d = cf_derivative(sample(np.exp, 0.0, 1.0, 2.0**-12), FracOrder(0.5))
        assert abs(d.values[-1] - E_MINUS_INV_E) < 1e-7

    def test_square(self, sample):
        d = cf_derivative(sample(lambda t: t**2, 0.0, 1.0, 1e-3), FracOrder(0.5))
        assert abs(d.values[-1] - 4 * math.exp(-1)) < 1e-6

    def test_recurrence_matches_direct_sum(self):
        rng = np.random.default_rng(0)
        values = np.cumsum(rng.normal(size=200))
        f = SampledFunction(UniformGrid(0.0, 0.01, 199), values)
        np.testing.assert_allclose(
            cf_derivative(f, 0.6).values, direct_cf_derivative(values, 0.01, 0.6), rtol=1e-12, atol=1e-12
        )

    @settings(max_examples=50, deadline=None)
    @given(arrays(float, 17, elements=st.floats(-1e3, 1e3)), st.floats(0.01, 0.99))
    def test_zero_at_start(self, values, alpha):
        f = SampledFunction(UniformGrid(-1.0, 0.1, 16), values)
        assert cf_derivative(f, alpha).values[0] == 0.0

    @settings(max_examples=50, deadline=None)
    @given(arrays(float, 33, elements=st.floats(-10, 10)), arrays(float, 33, elements=st.floats(-10, 10)),
           st.floats(-3, 3), st.floats(-3, 3), st.floats(0.01, 0.99))
    def test_linearity(self, u, v, c1, c2, alpha):
        g = UniformGrid(0.0, 0.05, 32)
        fu, fv = SampledFunction(g, u), SampledFunction(g, v)
        for op in (cf_derivative, cf_integral):
            lhs = op(c1 * fu + c2 * fv, alpha).values
            rhs = c1 * op(fu, alpha).values + c2 * op(fv, alpha).values
            scale = 1 + np.max(np.abs(op(fu, alpha).values)) + np.max(np.abs(op(fv, alpha).values))
            assert max_err(lhs, rhs) <= 1e-12 * scale * (1 + abs(c1) + abs(c2))

    def test_second_order_convergence_sine(self, sample):
        alpha = 0.5
        lam = 1.0
        exact = lambda t: (alpha * np.cos(t) + (1 - alpha) * np.sin(t) - alpha * np.exp(-lam * t)) / 0.5
        errs = []
        for n in (1000, 2000, 4000):
            f = SampledFunction.from_callable(np.sin, UniformGrid.from_count(0.0, 2 * np.pi, n))
            errs.append(max_err(cf_derivative(f, alpha).values, exact(f.t)))
        assert math.log2(errs[0] / errs[1]) >= 1.9
        assert math.log2(errs[1] / errs[2]) >= 1.9

    def test_rejects_single_node_grid(self):
        with pytest.raises(GridError):
            UniformGrid(0.0, 0.1, 0)


class TestIntegral:
    def test_zero(self, sample):
        assert np.all(cf_integral(sample(lambda t: 0 * t, 0.0, 1.0, 0.1), 0.3).values == 0.0)

    def test_constant(self, sample):
        v = cf_integral(sample(lambda t: 1 + 0 * t, 0.0, 2.0, 0.25), 0.5).values
        assert v[-1] == pytest.approx(1.5, abs=1e-15)

    def test_linear(self, sample):
        v = cf_integral(sample(lambda t: t, 0.0, 1.0, 0.125), 0.25).values
        assert v[-1] == pytest.approx(0.875, abs=1e-15)


class TestInverseIdentities:
    @pytest.mark.parametrize("fn", [np.exp, lambda t: t**2, np.sin, np.cos])
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_barrow_rule(self, sample, fn, alpha):
        f = sample(fn, 0.0, 2.0, 1e-3)
        back = cf_integral(cf_derivative(f, alpha), alpha).values
        assert max_err(back, f.values - f.values[0]) <= 5e-5

    @pytest.mark.parametrize("fn", [np.exp, lambda t: t**2, np.sin, np.cos])
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_left_inverse_defect(self, sample, fn, alpha):
        f = sample(fn, 0.5, 2.5, 1e-3)
        lam = alpha / (1 - alpha)
        back = cf_derivative(cf_integral(f, alpha), alpha).values
        expected = f.values - f.values[0] * np.exp(-lam * (f.t - 0.5))
        assert max_err(back, expected) <= 5e-5

    def test_inverse_exact_when_vanishing_at_start(self, sample):
        f = sample(np.sin, 0.0, 1.0, 1e-3)
        assert max_err(cf_integral(cf_derivative(f, 0.4), 0.4).values, f.values) <= 5e-6


class TestHigherOrder:
    def test_constant(self, sample):
        d = cf_derivative_higher(sample(lambda t: 2 + 0 * t, 0.0, 1.0, 0.01), 1, 0.5)
        assert np.all(np.abs(d.values) < 1e-12)

    def test_square(self, sample):
        d = cf_derivative_higher(sample(lambda t: t**2, 0.0, 1.0, 1e-3), 1, FracOrder(0.5))
        assert d.values[0] == 0.0
        assert abs(d.values[-1] - 4 * (1 - math.exp(-1))) < 1e-9

    def test_exponential(self, sample):
        d = cf_derivative_higher(sample(np.exp, 0.0, 1.0, 1e-3), 1, FracOrder(0.5))
        assert abs(d.values[-1] - E_MINUS_INV_E) < 5e-6

    @pytest.mark.parametrize("n", [1, 2])
    def test_second_order_accuracy(self, sample, n):
        errs = []
        for dt in (4e-3, 2e-3, 1e-3):
            d = cf_derivative_higher(sample(np.exp, 0.0, 1.0, dt), n, FracOrder(0.5))
            errs.append(abs(d.values[-1] - E_MINUS_INV_E))
        assert math.log2(errs[0] / errs[1]) >= 1.8
        assert math.log2(errs[1] / errs[2]) >= 1.8

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_difference_exact_on_polynomials(self, n):
        t = np.linspace(0.0, 1.0, 11)
        dt = t[1] - t[0]
        # stencils of n + 2 points differentiate degree n + 1 polynomials exactly
        p = np.polynomial.Polynomial(np.arange(1.0, n + 3))
        got = nth_difference(p(t), dt, n)
        np.testing.assert_allclose(got, p.deriv(n)(t), rtol=1e-8, atol=1e-8)

    def test_grid_too_short(self):
        f = SampledFunction(UniformGrid(0.0, 0.1, 2), [0.0, 1.0, 2.0])
        with pytest.raises(GridError):
            cf_derivative_higher(f, 2, 0.5)

    def test_rejects_zero_order(self, sample):
        with pytest.raises(DomainError):
            cf_derivative_higher(sample(np.exp, 0.0, 1.0, 0.1), 0, 0.5)


class TestTranslation:
    def test_zero_elapsed(self):
        assert translate_lower_limit(1.25, 1.25, 0.5, 0.0) == 0.0

    def test_identity_when_nothing_to_subtract(self):
        assert translate_lower_limit(3.5, 0.0, 0.3, 2.0) == 3.5

    def test_exponential_against_quadrature(self):
        # lower limit 0 values of D^0.5 e^t are e^t - e^-t
        full = lambda t: math.exp(t) - math.exp(-t)
        got = translate_lower_limit(full(2.0), full(1.0), 0.5, 1.0)
        assert got == pytest.approx(math.e**2 - 1, abs=1e-13)
        assert abs(got - oracle_shifted(OracleSpec(np.exp, 1.0, 2.0, 0.5))) <= 1e-8

    def test_matches_grid_operator(self, sample):
        # shifting the lower limit of the grid operator agrees with translation
        f0 = sample(np.exp, 0.0, 3.0, 1e-3)
        f1 = sample(np.exp, 1.0, 3.0, 1e-3)
        d0 = cf_derivative(f0, 0.5).values
        d1 = cf_derivative(f1, 0.5).values
        got = translate_lower_limit(d0[-1], d0[1000], 0.5, 2.0)
        assert got == pytest.approx(d1[-1], rel=1e-10)

    def test_rejects_negative_elapsed(self):
        with pytest.raises(DomainError):
            translate_lower_limit(1.0, 1.0, 0.5, -0.1)
