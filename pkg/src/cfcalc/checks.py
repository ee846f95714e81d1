"""Self-verification suites behind ``cfcalc verify``.

Each suite is a list of named checks; a check returns ``(passed, detail)``.
They exercise the library invariants at small, fast sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import catalog as cat
from .operators import FracOrder, SampledFunction, UniformGrid, cf_derivative, cf_integral
from .oracle import OracleSpec, default_grading, oracle_cf_derivative, oracle_shifted
from .operators import translate_lower_limit
from .solver import IVP, SolverConfig, segment_join_check, solve_global
from .special import mittag_leffler_1

__all__ = ["CheckResult", "SUITES", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def _grid_fn(fn, a, b, dt):
    grid = UniformGrid.from_step(a, b, dt)
    return SampledFunction.from_callable(fn, grid)


def _inverse_identities():
    worst_id, worst_di = 0.0, 0.0
    for f in (np.exp, lambda t: t**2, np.sin):
        s = _grid_fn(f, 0.0, 2.0, 1e-3)
        for alpha in (0.25, 0.5, 0.75):
            order = FracOrder(alpha)
            id_ = cf_integral(cf_derivative(s, order), order).values - (s.values - s.values[0])
            di = cf_derivative(cf_integral(s, order), order).values - (
                s.values - s.values[0] * np.exp(-order.lam * s.t))
            worst_id = max(worst_id, float(np.max(np.abs(id_))))
            worst_di = max(worst_di, float(np.max(np.abs(di))))
    ok = worst_id <= 5e-5 and worst_di <= 5e-5
    return ok, f"max |I(D f) - (f - f(a))| = {worst_id:.2e}, max |D(I f) - (f - f(a) e^(-lam t))| = {worst_di:.2e}"


def _translation():
    order = FracOrder(0.5)
    worst = 0.0
    for t in (1.5, 2.0, 3.0):
        full_t = cat.cf_derivative_closed(cat.Exponential(1.0), order, 0.0, t)
        full_a = cat.cf_derivative_closed(cat.Exponential(1.0), order, 0.0, 1.0)
        lhs = translate_lower_limit(full_t, full_a, order, t - 1.0)
        rhs = oracle_shifted(OracleSpec(np.exp, 1.0, t, 0.5))
        worst = max(worst, abs(lhs - rhs))
    return worst <= 1e-8, f"max deviation {worst:.2e}"


def _scheme_order():
    order = FracOrder(0.5)
    errs = []
    for dt in (2e-3, 1e-3, 5e-4):
        n = math.ceil(2 * math.pi / dt)
        s = SampledFunction.from_callable(np.sin, UniformGrid.from_count(0.0, 2 * math.pi, n))
        exact = np.array([cat.cf_derivative_closed(cat.Sine(), order, 0.0, t) for t in s.t])
        errs.append(float(np.max(np.abs(cf_derivative(s, order).values - exact))))
    ratios = [errs[i] / errs[i + 1] for i in range(2)]
    return min(ratios) >= 3.6, "errors " + ", ".join(f"{e:.2e}" for e in errs)


CATALOG_SAMPLE = (
    cat.Power(0.5), cat.Power(2.5), cat.Monomial(1), cat.Monomial(2), cat.Monomial(3),
    cat.Monomial(4), cat.Exponential(1.0), cat.Exponential(-1.0), cat.Sine(), cat.Cosine(),
)


def _oracle_vs_closed():
    worst = 0.0
    for fn in CATALOG_SAMPLE:
        grading = default_grading(fn.beta if isinstance(fn, cat.Power) else None)
        for alpha in (0.25, 0.5, 0.75):
            for t in (0.1, 1.0, 5.0):
                spec = OracleSpec(fn.prime, 0.0, t, alpha, grading_exponent=grading)
                worst = max(worst, abs(oracle_cf_derivative(spec)
                                       - cat.cf_derivative_closed(fn, alpha, 0.0, t)))
    return worst <= 1e-8, f"max |oracle - closed form| = {worst:.2e}"


def _sine_at_zero():
    zeros = [cat.cf_derivative_closed(cat.Sine(), a / 10, 0.0, 0.0) for a in range(1, 10)]
    ok = all(z == 0.0 for z in zeros) and cat.classical_limit_derivative(cat.Sine(), 0.0, 0.0) == 1.0
    return ok, "CF derivative of sin at 0 is 0 for alpha = 0.1..0.9; classical derivative is 1"


def _mittag_leffler():
    zs = np.linspace(-200.0, 20.0, 64)
    worst = max(abs(mittag_leffler_1(1.0, z) - math.exp(z)) / max(1.0, math.exp(z)) for z in zs)
    e2 = mittag_leffler_1(2.0, -50.0)
    rel2 = abs(e2 - (1 - math.exp(-50.0)) / 50.0) / ((1 - math.exp(-50.0)) / 50.0)
    return worst <= 1e-12 and rel2 <= 1e-12, f"E_1,1 vs exp: {worst:.1e}; E_1,2(-50): {rel2:.1e}"


def _monotone(errors):
    return all(errors[i + 1] < errors[i] for i in range(len(errors) - 1))


def _limit_alpha_to_one():
    errors = []
    for alpha, dt in ((0.9, 1e-4), (0.99, 1e-4), (0.999, 1e-5)):
        s = _grid_fn(np.exp, 0.0, 1.0, dt)
        d = cf_derivative(s, alpha).values
        mask = s.t >= 0.1 - 1e-12
        errors.append(float(np.max(np.abs(d[mask] - np.exp(s.t[mask])))))
    return _monotone(errors), "errors " + ", ".join(f"{e:.3e}" for e in errors)


def _limit_alpha_to_zero():
    errors = []
    s = _grid_fn(np.exp, 0.0, 1.0, 1e-3)
    for alpha in (0.1, 0.01, 0.001):
        d = cf_derivative(s, alpha).values
        errors.append(float(np.max(np.abs(d - (s.values - 1.0)))))
    return _monotone(errors), "errors " + ", ".join(f"{e:.3e}" for e in errors)


def _power_ml_limit():
    errors = []
    for alpha in (0.9, 0.99, 0.999):
        errors.append(abs(cat.cf_derivative_closed(cat.Power(2.5), alpha, 0.0, 1.0) - 2.5))
    return _monotone(errors), "errors " + ", ".join(f"{e:.3e}" for e in errors)


def _manufactured_ivp(dt):
    def phi(t, x):
        return 0.5 * x + 4 * t - 4 * (1 - np.exp(-t)) - 0.5 * t**2

    ivp = IVP(phi, 0.0, 0.0, 0.5, FracOrder(0.5))
    return ivp, solve_global(ivp, 5.0, SolverConfig(dt_grid=dt))


def _global_solver():
    ivp, traj = _manufactured_ivp(1e-3)
    err = float(np.max(np.abs(traj.values - traj.t**2)))
    join = segment_join_check(traj, ivp)
    ok = err <= 1e-4 and join <= 1e-4 and traj.n_segments >= 2
    return ok, f"{traj.n_segments} segments, max error {err:.2e}, join defect {join:.2e}"


def _residual_order():
    res = [_manufactured_ivp(dt)[1].max_residual for dt in (4e-3, 2e-3, 1e-3)]
    orders = [math.log2(res[i] / res[i + 1]) for i in range(2)]
    return min(orders) >= 1.9, "observed orders " + ", ".join(f"{p:.2f}" for p in orders)


SUITES: dict[str, list[tuple[str, Callable[[], tuple[bool, str]]]]] = {
    "ops": [
        ("inverse-operator identities", _inverse_identities),
        ("translation formula", _translation),
        ("scheme order", _scheme_order),
    ],
    "catalog": [
        ("oracle vs closed form", _oracle_vs_closed),
        ("sine at zero", _sine_at_zero),
        ("Mittag-Leffler reference values", _mittag_leffler),
    ],
    "solver": [
        ("global manufactured solution", _global_solver),
        ("residual order", _residual_order),
    ],
    "limits": [
        ("alpha -> 1 limit", _limit_alpha_to_one),
        ("alpha -> 0 limit", _limit_alpha_to_zero),
        ("power function alpha -> 1 limit", _power_ml_limit),
    ],
}


def run_suite(name: str) -> list[CheckResult]:
    """Run one suite, or every suite for ``name == "all"``."""
    names = list(SUITES) if name == "all" else [name]
    results = []
    for suite in names:
        for check_name, check in SUITES[suite]:
            try:
                passed, detail = check()
            except Exception as exc:  # a crash is a failed check, not a crashed report
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            results.append(CheckResult(suite, check_name, bool(passed), detail))
    return results
