"""Asymptotic MISE diagnostics for the gamma-kernel derivative estimator.

Covers the leading MISE term for independent data, the pointwise covariance
bound for strongly mixing data (with its constants ``C1``, ``C2``, ``C3``),
the resulting MISE upper bound, and the closed-form integral of the AR(1)
mixing-coefficient bound.

All integrals over ``x`` run from ``1e-6`` to the ``1 - 1e-9`` quantile of
the reference distribution.  The MISE expressions are affine in ``1/n`` and
polynomial in powers of ``b``, so the ``x``-integrals are computed once per
distribution and cached.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from . import _quad
from .bandwidth import squared_bias_density
from .distributions import ReferenceDistribution
from .errors import DomainError

__all__ = [
    "MixingSpec",
    "CovarianceConstants",
    "OrderConvention",
    "MiseTerms",
    "DependentMiseTerms",
    "pointwise_P",
    "mise_terms",
    "mise_leading_term",
    "covariance_constants",
    "covariance_bound",
    "mixing_integral",
    "mixing_bound",
    "mise_dependent_terms",
    "mise_upper_bound_dependent",
]

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class MixingSpec:
    """Parameters of the AR(1) strong-mixing bound.

    ``alpha(tau) <= 2 (C + 1) E|X|^nu |rho^nu|^tau`` for ``tau >= tau0`` and
    ``1`` below ``tau0``; ``upsilon`` is the exponent in the covariance bound.
    """

    C: float
    nu: float
    rho_ar: float
    tau0: float
    abs_moment: float
    upsilon: float

    def __post_init__(self):
        if not self.C > 0:
            raise DomainError("C must be positive")
        if not 0 < self.nu <= 1:
            raise DomainError("nu must lie in (0, 1]")
        if not -1 < self.rho_ar < 1:
            raise DomainError("AR coefficient must satisfy |rho| < 1")
        if not self.tau0 >= 1:
            raise DomainError("tau0 must be at least 1")
        if not self.abs_moment > 0:
            raise DomainError("E|X|^nu must be positive")
        if not 0 < self.upsilon < 1:
            raise DomainError("upsilon must lie in (0, 1)")


@dataclass(frozen=True)
class CovarianceConstants:
    c1: float
    c2: float
    c3: float


class OrderConvention(enum.Enum):
    #: the constants are evaluated at upsilon itself
    UPSILON = "upsilon"
    #: the constants are evaluated at q = 2 + delta, upsilon = delta / (2 + delta)
    Q = "q"


def _order(upsilon: float, convention: OrderConvention) -> float:
    if OrderConvention(convention) is OrderConvention.UPSILON:
        return upsilon
    delta = 2.0 * upsilon / (1.0 - upsilon)
    return 2.0 + delta


def _positive(x) -> None:
    if np.any(~(np.asarray(x, dtype=float) > 0)):
        raise DomainError("x must be positive")


def pointwise_P(dist: ReferenceDistribution, x):
    """Squared-bias density ``(f/(3x^2) + f'')^2`` at ``x > 0``."""
    _positive(x)
    return squared_bias_density(dist, x)


def covariance_constants(dist: ReferenceDistribution, q_order: float, x: float) -> CovarianceConstants:
    _positive(x)
    return _constants_from(dist.pdf(x), dist.pdf_derivative(x), dist.pdf_second_derivative(x), q_order, x)


def _constants_from(f, f1, f2, q, x) -> CovarianceConstants:
    c1 = -f * (2 * q**3 - 9 * q**2 + 4 * q - 33) / (24 * x) - f1 * (q + 1) / 2 + f2 * x / 2
    c2 = (
        f * (2 * q + 54 * x - q**2 * x + 21 * q**3 * x + q**4 * x + 93 * q * x) / (144 * x**3)
        - f1 * (q + 1) ** 2 / (12 * x)
        + f2 * (q + 1) / 12
    )
    c3 = -f * (q + 1) * (q - 2) / 2
    return CovarianceConstants(c1, c2, c3)


def _cov_prefactor(upsilon: float, b: float, n: int) -> float:
    return 2.0 ** (-(upsilon + 3) / 2) * math.pi ** ((1 - upsilon) / 2) * b ** (-(upsilon + 1) / 2) / n


def mixing_integral(spec: MixingSpec) -> float:
    """Closed form of ``int_1^inf alpha~(tau)^upsilon d tau``."""
    r = abs(spec.rho_ar) ** spec.nu
    head = spec.tau0 - 1.0
    if r == 0.0:
        return head
    scale = (2.0 * (spec.C + 1.0) * spec.abs_moment) ** spec.upsilon
    return head + scale * r ** (spec.tau0 * spec.upsilon) / (spec.upsilon * math.log(1.0 / r))


def mixing_bound(spec: MixingSpec, tau):
    """The piecewise bound ``alpha~(tau)`` on the mixing coefficients."""
    tau = np.asarray(tau, dtype=float)
    r = abs(spec.rho_ar) ** spec.nu
    tail = 2.0 * (spec.C + 1.0) * spec.abs_moment * r**tau
    out = np.where(tau >= spec.tau0, tail, 1.0)
    return float(out) if out.ndim == 0 else out


def covariance_bound(
    dist: ReferenceDistribution,
    x: float,
    b: float,
    n: int,
    spec: MixingSpec,
    convention: OrderConvention = OrderConvention.UPSILON,
) -> float:
    """Upper bound on ``|C(x)|``, the covariance part of the variance at ``x``.

    The polynomial ``b^2 C2 + b C1 + C3`` can be negative; its magnitude is
    raised to ``1 - upsilon``.
    """
    _positive(x)
    if not b > 0:
        raise DomainError("bandwidth must be positive")
    if n < 1:
        raise DomainError("n must be at least 1")
    u = spec.upsilon
    c = covariance_constants(dist, _order(u, convention), x)
    base = abs(b * b * c.c2 + b * c.c1 + c.c3)
    return _cov_prefactor(u, b, n) * x ** (-(u + 5) / 2) * base ** (1 - u) * mixing_integral(spec)


@dataclass(frozen=True)
class _XIntegrals:
    P: float
    var0: float
    var1: float


@functools.lru_cache(maxsize=64)
def _x_integrals(dist: ReferenceDistribution) -> _XIntegrals:
    lo, hi = _quad.LOWER_CUT, _quad.upper_limit(dist)
    ip = _quad.integrate_positive(lambda x: squared_bias_density(dist, x), lo, hi, what="int P")
    v0 = _quad.integrate_positive(lambda x: x**-1.5 * dist.pdf(x), lo, hi, what="variance integral")
    v1 = _quad.integrate_positive(
        lambda x: x**-1.5 * (dist.pdf(x) / (2 * x) - dist.pdf_derivative(x) / 2),
        lo,
        hi,
        what="variance correction integral",
    )
    return _XIntegrals(ip, v0, v1)


@functools.lru_cache(maxsize=256)
def _cov_integral(dist: ReferenceDistribution, upsilon: float, convention: OrderConvention) -> float:
    q = _order(upsilon, convention)
    lo, hi = _quad.LOWER_CUT, _quad.upper_limit(dist)

    def g(x):
        c3 = -dist.pdf(x) * (q + 1) * (q - 2) / 2
        return x ** (-(upsilon + 5) / 2) * abs(c3) ** (1 - upsilon)

    return _quad.integrate_positive(g, lo, hi, what="covariance integral")


@dataclass(frozen=True)
class MiseTerms:
    bias: float
    variance: float

    @property
    def total(self) -> float:
        return self.bias + self.variance


@dataclass(frozen=True)
class DependentMiseTerms:
    bias: float
    variance: float
    covariance: float

    @property
    def total(self) -> float:
        return self.variance + self.covariance + self.bias


def _check_bn(b: float, n: int) -> None:
    if not b > 0:
        raise DomainError("bandwidth must be positive")
    if n < 1:
        raise DomainError("n must be at least 1")


def mise_terms(dist: ReferenceDistribution, b: float, n: int) -> MiseTerms:
    """Integrated squared bias and variance of the leading MISE expansion.

    The variance carries a first-order correction ``b * int x^-3/2 (f/x - f')/2``
    whose integral is negative, so for large ``b`` (about 0.24 for
    Gamma(2.43, 1)) the two-term expansion turns negative.  It is only
    meaningful in the small-``b`` regime it was derived for.
    """
    _check_bn(b, n)
    xi = _x_integrals(dist)
    bias = b * b / 16.0 * xi.P
    variance = b**-1.5 * (xi.var0 + b * xi.var1) / (4.0 * _SQRT_PI) / n
    return MiseTerms(bias, variance)


def mise_leading_term(dist: ReferenceDistribution, b: float, n: int) -> float:
    return mise_terms(dist, b, n).total


def mise_dependent_terms(
    dist: ReferenceDistribution,
    b: float,
    n: int,
    spec: MixingSpec,
    convention: OrderConvention = OrderConvention.UPSILON,
) -> DependentMiseTerms:
    """Bias, variance and covariance addends of the dependent-data MISE bound.

    The covariance addend keeps only ``C3``, the ``b``-free part of the
    constants polynomial.
    """
    base = mise_terms(dist, b, n)
    mix = mixing_integral(spec)
    if mix == 0.0:
        cov = 0.0
    else:
        cov = _cov_prefactor(spec.upsilon, b, n) * _cov_integral(dist, spec.upsilon, OrderConvention(convention)) * mix
    return DependentMiseTerms(base.bias, base.variance, cov)


def mise_upper_bound_dependent(
    dist: ReferenceDistribution,
    b: float,
    n: int,
    spec: MixingSpec,
    convention: OrderConvention = OrderConvention.UPSILON,
) -> float:
    return mise_dependent_terms(dist, b, n, spec, convention).total
