"""Closed-form Caputo-Fabrizio derivatives of elementary functions.

Families: ``(t-a)^beta``, ``(t-a)^m``, ``exp(c t)``, ``sin t``, ``cos t`` and
constants. Power functions go through ``E_{1,beta}``; monomials use the finite
expansion into a dominant term, a memory polynomial and an exponential
perturbation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .operators import FracOrder, _as_order, translate_lower_limit
from .special import gamma, mittag_leffler_1, rgamma

__all__ = [
    "Power",
    "Monomial",
    "Exponential",
    "Sine",
    "Cosine",
    "Constant",
    "CatalogFunction",
    "cf_derivative_closed",
    "classical_limit_derivative",
    "power_series_form",
    "monomial_terms",
    "SERIES_SWITCH",
]

#: Below this value of ``lam * (t - a)`` power functions use the rearranged series.
SERIES_SWITCH = 0.1


@dataclass(frozen=True)
class Power:
    """``(t - a)**beta`` for ``beta > 0``."""

    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise DomainError(f"Power needs beta > 0, got {self.beta!r}")

    def value(self, t, a=0.0):
        return (np.asarray(t, dtype=float) - a) ** self.beta

    def prime(self, t, a=0.0):
        return self.beta * (np.asarray(t, dtype=float) - a) ** (self.beta - 1.0)


@dataclass(frozen=True)
class Monomial:
    """``(t - a)**m`` for integer ``m >= 1``."""

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"Monomial needs an integer m >= 1, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))

    def value(self, t, a=0.0):
        return (np.asarray(t, dtype=float) - a) ** self.m

    def prime(self, t, a=0.0):
        return self.m * (np.asarray(t, dtype=float) - a) ** (self.m - 1)


@dataclass(frozen=True)
class Exponential:
    """``exp(c t)``."""

    c: float = 1.0

    def value(self, t, a=0.0):
        return np.exp(self.c * np.asarray(t, dtype=float))

    def prime(self, t, a=0.0):
        return self.c * np.exp(self.c * np.asarray(t, dtype=float))


@dataclass(frozen=True)
class Sine:
    def value(self, t, a=0.0):
        return np.sin(t)

    def prime(self, t, a=0.0):
        return np.cos(t)


@dataclass(frozen=True)
class Cosine:
    def value(self, t, a=0.0):
        return np.cos(t)

    def prime(self, t, a=0.0):
        return -np.sin(t)


@dataclass(frozen=True)
class Constant:
    c: float = 0.0

    def value(self, t, a=0.0):
        return np.full(np.shape(t), self.c, dtype=float)

    def prime(self, t, a=0.0):
        return np.zeros(np.shape(t))


CatalogFunction = Union[Power, Monomial, Exponential, Sine, Cosine, Constant]


def _power_tail(beta: float, order: FracOrder, s: float) -> float:
    # (beta Gamma(beta)/alpha) lam^(1-beta) u^beta sum_{k>=0} (-u)^k/Gamma(k+1+beta)
    # with u = lam*s; every exponent k+beta is positive, so the value is 0 at s=0.
    # The sum is E_{1,1+beta}(-u); the alternating form cancels badly past u ~ 1.
    if s == 0.0:
        return 0.0
    u = order.lam * s
    scale = beta * gamma(beta) / order.alpha * order.lam ** (1.0 - beta) * u**beta
    if u > 1.0:
        return scale * mittag_leffler_1(1.0 + beta, -u)
    term = rgamma(1.0 + beta)
    parts = [term]
    k = 1
    while abs(term) > 1e-18 * abs(parts[0]):
        term *= -u / (k + beta)
        parts.append(term)
        k += 1
    return scale * math.fsum(parts)


def power_series_form(beta: float, order, t: float) -> float:
    """CF derivative of ``t**beta`` (lower limit 0) from the rearranged series.

    Every exponent in the series is positive for ``0 < beta < 1``, so the
    value extends continuously by 0 at ``t = 0`` even though ``t**beta`` has
    no classical derivative there.
    """
    if not (0.0 < beta < 1.0):
        raise DomainError(f"power_series_form needs 0 < beta < 1, got {beta!r}")
    if t < 0.0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    return _power_tail(float(beta), _as_order(order), float(t))


def _power_closed(beta: float, order: FracOrder, s: float) -> float:
    if s == 0.0:
        return 0.0
    if order.lam * s < SERIES_SWITCH:
        return _power_tail(beta, order, s)
    ml = mittag_leffler_1(beta, -order.lam * s)
    return beta / order.alpha * s ** (beta - 1.0) * (1.0 - gamma(beta) * ml)


def monomial_terms(m: int, order, s: float) -> tuple[float, float, float]:
    """Split of the CF derivative of ``(t-a)**m`` at ``t - a = s``.

    Returns ``(dominant, memory, exponential)``: the term ``(m/alpha) s^(m-1)``
    that survives as ``alpha -> 1``, the polynomial memory correction, and the
    decaying exponential perturbation. Their sum is the derivative.
    """
    order = _as_order(order)
    alpha = order.alpha
    q = -1.0 / order.lam  # -(1-alpha)/alpha
    mfact = math.factorial(m)
    dominant = m / alpha * s ** (m - 1)
    memory = math.fsum(
        q ** (m - k - 1) * s**k / math.factorial(k) for k in range(m - 1)
    ) * mfact / alpha
    exponential = -mfact / alpha * q ** (m - 1) * math.exp(-order.lam * s)
    return dominant, memory, exponential


def _monomial_closed(m: int, order: FracOrder, s: float) -> float:
    if s == 0.0:
        return 0.0
    return math.fsum(monomial_terms(m, order, s))


def _exp_closed(c: float, order: FracOrder, t: float) -> float:
    # c/(c(1-alpha)+alpha) (e^{ct} - e^{-lam t}), written with expm1 so the
    # approach to the degenerate rate c = -lam stays accurate.
    d = c + order.lam
    decay = math.exp(-order.lam * t)
    if c * (1.0 - order.alpha) + order.alpha == 0.0 or d == 0.0:
        return c * t / (1.0 - order.alpha) * decay
    if abs(d * t) >= 1.0:
        # no cancellation left to guard against, and expm1 alone may overflow
        return c * (math.exp(c * t) - decay) / ((1.0 - order.alpha) * d)
    return c * decay * math.expm1(d * t) / ((1.0 - order.alpha) * d)


def _sine_closed(order: FracOrder, t: float) -> float:
    alpha = order.alpha
    denom = (1.0 - alpha) ** 2 + alpha**2
    return (alpha * math.cos(t) + (1.0 - alpha) * math.sin(t)
            - alpha * math.exp(-order.lam * t)) / denom


def _cosine_closed(order: FracOrder, t: float) -> float:
    alpha = order.alpha
    denom = (1.0 - alpha) ** 2 + alpha**2
    return (-alpha * math.sin(t) + (1.0 - alpha) * math.cos(t)
            - (1.0 - alpha) * math.exp(-order.lam * t)) / denom


_FROM_ZERO = {
    Exponential: lambda fn, order, t: _exp_closed(fn.c, order, t),
    Sine: lambda fn, order, t: _sine_closed(order, t),
    Cosine: lambda fn, order, t: _cosine_closed(order, t),
}


def cf_derivative_closed(fn: CatalogFunction, order, a: float, t: float) -> float:
    """Exact CF derivative with lower limit ``a`` at time ``t >= a``.

    Power and Monomial are shifted to start at ``a``. Exponential, Sine and
    Cosine are the unshifted functions; their closed forms are stated for the
    lower limit 0, and any other ``a`` goes through the translation formula.
    """
    order = _as_order(order)
    a = float(a)
    t = float(t)
    if t < a:
        raise DomainError(f"t={t!r} precedes the lower limit a={a!r}")
    if isinstance(fn, Constant):
        return 0.0
    if isinstance(fn, Power):
        return _power_closed(fn.beta, order, t - a)
    if isinstance(fn, Monomial):
        return _monomial_closed(fn.m, order, t - a)
    closed = _FROM_ZERO[type(fn)]
    if a == 0.0:
        return closed(fn, order, t)
    return translate_lower_limit(closed(fn, order, t), closed(fn, order, a), order, t - a)


def classical_limit_derivative(fn: CatalogFunction, a: float, t: float) -> float:
    """First classical derivative, the ``alpha -> 1`` limit of the CF derivative."""
    if isinstance(fn, Power):
        if t < a or (fn.beta < 1.0 and t == a):
            raise DomainError(f"(t-a)^{fn.beta} has no derivative at t={t!r}")
        return fn.beta * (t - a) ** (fn.beta - 1.0)
    if isinstance(fn, Monomial):
        return fn.m * (t - a) ** (fn.m - 1)
    if isinstance(fn, Exponential):
        return fn.c * math.exp(fn.c * t)
    if isinstance(fn, Sine):
        return math.cos(t)
    if isinstance(fn, Cosine):
        return -math.sin(t)
    return 0.0
