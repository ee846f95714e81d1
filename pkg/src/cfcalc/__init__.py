"""Caputo-Fabrizio fractional calculus.

Numeric derivative and integral on uniform grids, closed forms for
elementary functions (via Mittag-Leffler functions), a quadrature oracle,
and a globally-in-time solver for ``D^alpha f = phi(t, f)``.
"""

from .catalog import (
    Constant,
    Cosine,
    Exponential,
    Monomial,
    Power,
    Sine,
    cf_derivative_closed,
    classical_limit_derivative,
    monomial_terms,
    power_series_form,
)
from .errors import (
    CFError,
    CompatibilityViolation,
    DomainError,
    EvalDomainError,
    ExprSyntaxError,
    GridError,
    NonConvergence,
    OracleDivergence,
    UnknownIdentifier,
    WindowViolation,
)
from .expr import estimate_lipschitz, evaluate, parse
from .operators import (
    FracOrder,
    SampledFunction,
    UniformGrid,
    cf_derivative,
    cf_derivative_higher,
    cf_integral,
    translate_lower_limit,
)
from .oracle import OracleSpec, oracle_cf_derivative, oracle_shifted
from .solver import (
    IVP,
    SolverConfig,
    Trajectory,
    contraction_window,
    segment_join_check,
    solve_global,
    solve_local,
)
from .special import gamma, mittag_leffler_1, mittag_leffler_1_integer_beta

__version__ = "0.1.0"
