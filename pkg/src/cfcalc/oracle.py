"""Brute-force quadrature of the defining Caputo-Fabrizio integral.

This module is deliberately independent of :mod:`cfcalc.operators` and
:mod:`cfcalc.catalog`: it integrates ``f'(tau) exp(-lam (t - tau)) / (1-alpha)``
by composite Simpson on a mesh graded towards ``tau = a`` and doubles the
panel count until two successive results agree. It is slow and exists only to
certify the fast paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, OracleDivergence

__all__ = [
    "OracleSpec",
    "oracle_cf_derivative",
    "oracle_shifted",
    "simpson_sequence",
    "default_grading",
    "MAX_PANELS",
]

MAX_PANELS = 2**20


@dataclass(frozen=True)
class OracleSpec:
    """Everything the oracle needs to evaluate one derivative value.

    ``f_prime`` must accept numpy arrays. ``grading_exponent = p`` places the
    nodes at ``a + (t-a) (j/N)^p``; use ``p > 1`` when ``f'`` is singular at
    ``a``.
    """

    f_prime: Callable
    a: float
    t: float
    alpha: float
    panels: int = 16
    grading_exponent: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise DomainError(f"alpha must be in (0, 1), got {self.alpha!r}")
        p = self.panels
        if p < 16 or p & (p - 1):
            raise DomainError(f"panels must be a power of two >= 16, got {p!r}")
        if self.grading_exponent < 1.0:
            raise DomainError("grading_exponent must be >= 1")
        if self.t < self.a:
            raise DomainError(f"t={self.t!r} precedes the lower limit a={self.a!r}")


def default_grading(beta: float | None = None) -> float:
    """Grading exponent: 1 for smooth integrands, ``ceil(2/beta)`` for ``(t-a)^beta``, ``beta < 1``."""
    if beta is None or beta >= 1.0:
        return 1.0
    return float(math.ceil(2.0 / beta))


def _simpson(spec: OracleSpec, panels: int) -> float:
    lam = spec.alpha / (1.0 - spec.alpha)
    span = spec.t - spec.a
    p = spec.grading_exponent
    s = np.linspace(0.0, 1.0, panels + 1)
    tau = spec.a + span * s**p
    jac = span * p * s ** (p - 1.0) if p != 1.0 else np.full_like(s, span)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        fp = np.asarray(spec.f_prime(tau), dtype=float) * np.ones_like(s)
        g = fp * jac * np.exp(-lam * (spec.t - tau))
    if p > 1.0 and not np.isfinite(g[0]):
        # f' singular at a but the graded Jacobian vanishes faster
        g[0] = 0.0
    if not np.all(np.isfinite(g)):
        raise OracleDivergence("integrand is not finite on the quadrature mesh")
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    h = 1.0 / panels
    return float(h / 3.0 * np.dot(w, g) / (1.0 - spec.alpha))


def simpson_sequence(spec: OracleSpec, levels: int) -> list[float]:
    """Simpson values at ``panels * 2**k`` for ``k = 0..levels-1``."""
    return [_simpson(spec, spec.panels * 2**k) for k in range(levels)]


def oracle_cf_derivative(spec: OracleSpec, tol: float = 1e-10) -> float:
    """CF derivative at ``spec.t`` with lower limit ``spec.a`` by graded Simpson.

    Doubles the panel count until successive values differ by at most
    ``tol * max(1, |value|)`` and returns the finer value.

    Raises
    ------
    OracleDivergence
        if that never happens up to ``MAX_PANELS`` panels.
    """
    if spec.t == spec.a:
        return 0.0
    panels = spec.panels
    prev = _simpson(spec, panels)
    while panels < MAX_PANELS:
        panels *= 2
        cur = _simpson(spec, panels)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise OracleDivergence(
        f"no convergence within {MAX_PANELS} panels at t={spec.t!r}; "
        "a larger grading_exponent may be needed"
    )


def oracle_shifted(spec: OracleSpec, tol: float = 1e-10) -> float:
    """Same quadrature for a derivative whose lower limit ``a`` is not 0.

    Kept as its own entry point because it is the independent side of the
    translation-formula check.
    """
    return oracle_cf_derivative(spec, tol)
