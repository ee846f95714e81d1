"""Gamma and the one-parameter Mittag-Leffler family E_{1,beta}.

Only real arguments are supported. ``E_{1,beta}`` is evaluated by one of
three routes depending on the argument:

* ``z >= 0``: the defining series (all terms positive) with compensated
  summation;
* ``-50 <= z < 0``: the Kummer-transformed series
  ``E_{1,beta}(-x) = exp(-x)/Gamma(beta) * sum_k c_k x^k / k!`` with
  ``c_0 = 1`` and ``c_k = (beta-1)/(beta-1+k)``, whose terms share one sign
  for ``k >= 1`` so there is no cancellation;
* ``z < -50``: the algebraic asymptotic expansion
  ``sum_{j>=1} (-1)^{j+1} x^{-j} / Gamma(beta-j)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "MLArg",
    "gamma",
    "rgamma",
    "mittag_leffler_1",
    "mittag_leffler_1_integer_beta",
    "ASYMPTOTIC_SWITCH",
]

#: Arguments below ``-ASYMPTOTIC_SWITCH`` use the asymptotic expansion.
ASYMPTOTIC_SWITCH = 50.0

_MAX_GAMMA_ARG = 171.6

# Lanczos approximation, g = 6.024680040776729583740234375, 13 terms,
# written as a rational function num(x)/den(x).
_LANCZOS_G = 6.024680040776729583740234375
_LANCZOS_G_MINUS_HALF = 5.524680040776729583740234375
_LANCZOS_NUM = (
    23531376880.410759688572007674451636754734846804940,
    42919803642.649098768957899047001988850926355848959,
    35711959237.355668049440185451547166705960488635843,
    17921034426.037209699919755754458931112671403265390,
    6039542586.3520280050642916443072979210699388420708,
    1439720407.3117216736632230727949123939715485786772,
    248874557.86205415651146038641322942321632125127801,
    31426415.585400194380614231628318205362874684987640,
    2876370.6289353724412254090516208496135991145378768,
    186056.26539522349504029498971604569928220784236328,
    8071.6720023658162106380029022722506138218516325024,
    210.82427775157934587250973392071336271166969580291,
    2.5066282746310002701649081771338373386264310793408,
)
_LANCZOS_DEN = (
    0.0, 39916800.0, 120543840.0, 150917976.0, 105258076.0, 45995730.0,
    13339535.0, 2637558.0, 357423.0, 32670.0, 1925.0, 66.0, 1.0,
)

# 22! is the largest factorial a double holds exactly
_FACTORIALS = tuple(float(math.factorial(k)) for k in range(23))


def _lanczos_sum(x: float) -> float:
    num = 0.0
    den = 0.0
    if x < 5.0:
        for p, q in zip(reversed(_LANCZOS_NUM), reversed(_LANCZOS_DEN)):
            num = num * x + p
            den = den * x + q
    else:
        # Horner in 1/x keeps the partial sums finite for large x.
        for p, q in zip(_LANCZOS_NUM, _LANCZOS_DEN):
            num = num / x + p
            den = den / x + q
    return num / den


def _gamma_lanczos(x: float) -> float:
    y = x + _LANCZOS_G_MINUS_HALF
    # Rounding error committed when forming y, fed back as a first-order
    # correction.
    if x > _LANCZOS_G_MINUS_HALF:
        q = y - x
        z = q - _LANCZOS_G_MINUS_HALF
    else:
        q = y - _LANCZOS_G_MINUS_HALF
        z = q - x
    z = z * _LANCZOS_G / y
    r = _lanczos_sum(x) / math.exp(y)
    r += z * r
    if x > 140.0:
        half = math.pow(y, x / 2.0 - 0.25)
        return r * half * half
    return r * math.pow(y, x - 0.5)


def gamma(x: float) -> float:
    """Gamma function for real ``x > 0``.

    Integers up to 23 come from an exact factorial table; everything else
    uses a 13-term Lanczos approximation, with ``Gamma(x) = Gamma(x+1)/x``
    applied below 1 to stay in the accurate range.

    Raises
    ------
    DomainError
        if ``x <= 0`` or ``x`` is not finite.
    OverflowError
        if ``x > 171.6`` (the result exceeds the double range).
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma requires a finite x > 0, got {x!r}")
    if x > _MAX_GAMMA_ARG:
        raise OverflowError(f"gamma({x!r}) overflows a double")
    if x == math.floor(x) and x <= 23.0:
        return _FACTORIALS[int(x) - 1]
    if x < 1.0:
        return _gamma_lanczos(x + 1.0) / x
    return _gamma_lanczos(x)


def rgamma(x: float) -> float:
    """Reciprocal gamma ``1/Gamma(x)``, extended by 0 at non-positive integers.

    Negative non-integer arguments go through the reflection formula. This
    is only needed for the asymptotic ML expansion, where ``beta - j`` drops
    below zero.
    """
    x = float(x)
    if x > 0.0:
        if x > _MAX_GAMMA_ARG:
            return 0.0
        return 1.0 / gamma(x)
    if x == math.floor(x):
        return 0.0
    # 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
    return math.sin(math.pi * x) * gamma(1.0 - x) / math.pi


@dataclass(frozen=True)
class MLArg:
    """Arguments of ``E_{1,beta}(z)``."""

    beta: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise DomainError(f"beta must be > 0, got {self.beta!r}")
        if not math.isfinite(self.z):
            raise DomainError(f"z must be finite, got {self.z!r}")


def _kahan_series(beta: float, z: float) -> float:
    # sum_k z^k / Gamma(k + beta), terms built by the ratio z / (k + beta)
    term = rgamma(beta)
    total = term
    comp = 0.0
    peak = math.ceil(abs(z))
    k = 0
    while True:
        term *= z / (k + beta)
        k += 1
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s
        if k > peak and abs(term) <= 1e-17 * abs(total):
            return total
        if k > 10_000:  # pragma: no cover - unreachable for |z| within double range
            return total


def _kummer_series(beta: float, x: float) -> float:
    # E_{1,beta}(-x) = exp(-x) 1F1(beta-1; beta; x) / Gamma(beta)
    b1 = beta - 1.0
    if b1 == 0.0:
        return math.exp(-x)
    total = 1.0
    tail = 0.0
    comp = 0.0
    power = 1.0  # x^k / k!
    k = 0
    while True:
        k += 1
        power *= x / k
        term = b1 / (b1 + k) * power
        y = term - comp
        s = tail + y
        comp = (s - tail) - y
        tail = s
        if k > x and abs(term) <= 1e-17 * abs(tail):
            break
    return math.exp(-x) * (total + tail) * rgamma(beta)


def _asymptotic_negative(beta: float, x: float, max_terms: int = 10) -> float:
    total = 0.0
    xinv = 1.0 / x
    power = 1.0
    for j in range(1, max_terms + 1):
        power *= xinv
        coeff = rgamma(beta - j)
        if coeff == 0.0:
            continue
        total += (power * coeff) if j % 2 else -(power * coeff)
    return total


def mittag_leffler_1(beta: float | MLArg, z: float | None = None) -> float:
    """Evaluate ``E_{1,beta}(z) = sum_k z^k / Gamma(k + beta)``.

    Accepts either an :class:`MLArg` or the pair ``(beta, z)``.

    >>> round(mittag_leffler_1(1.0, 1.0), 12)
    2.718281828459
    """
    arg = beta if isinstance(beta, MLArg) else MLArg(float(beta), float(z))
    b, zz = arg.beta, arg.z
    if zz >= 0.0:
        return _kahan_series(b, zz)
    if zz >= -ASYMPTOTIC_SWITCH:
        return _kummer_series(b, -zz)
    return _asymptotic_negative(b, -zz)


def mittag_leffler_1_integer_beta(m: int, z: float) -> float:
    """Closed form ``E_{1,m}(z) = z^{1-m} (exp(z) - sum_{k<=m-2} z^k/k!)``.

    The bracket is the remainder of the exponential series after ``m-1``
    terms. Near ``z = 0`` it is summed directly as ``sum_{k>=m-1} z^k/k!``,
    elsewhere it is formed with compensated (fsum) arithmetic.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"m must be an integer >= 1, got {m!r}")
    m = int(m)
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"z must be finite, got {z!r}")
    if z == 0.0:
        return rgamma(m)
    if m == 1:
        return math.exp(z)
    if m == 2:
        return math.expm1(z) / z
    if abs(z) < 2.0:
        # z^{1-m} sum_{k>=m-1} z^k/k! = sum_{j>=0} z^j/(j+m-1)!
        term = 1.0 / math.factorial(m - 1)
        parts = [term]
        j = 0
        while abs(term) > 1e-18 * abs(parts[0]):
            j += 1
            term *= z / (j + m - 1)
            parts.append(term)
        return math.fsum(parts)
    parts = [math.exp(z)]
    term = 1.0
    for k in range(m - 1):
        if k:
            term *= z / k
        parts.append(-term)
    return math.fsum(parts) / z ** (m - 1)
