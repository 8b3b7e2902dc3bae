"""Global bandwidth for the derivative estimator.

The bandwidth balances the integrated squared bias against the leading
variance term and takes the form ``b0 = (T / n) ** (2/7)`` with

    T  = 3 * I1 / (sqrt(pi) * I2)
    I1 = int x^(-3/2) f(x) dx
    I2 = int (f(x) / (3 x^2) + f''(x))^2 dx

The rule of thumb plugs a gamma density fitted by moments into ``I1`` and
``I2``.

For comparison the density-estimation bandwidth of the same kernel is also
available: ``b2 = (T2 / n) ** (2/5)`` with ``T2 = J1 / (2 sqrt(pi) J2)``,
``J1 = int x^(-1/2) f`` and ``J2 = int (x f''(x))^2``.  It minimises the MISE
of the density estimate, not of its derivative.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from . import _quad
from .distributions import Gamma, ReferenceDistribution
from .errors import DegenerateSampleError, DivergedFunctionalError, DomainError
from .estimator import Sample

__all__ = [
    "DensityFunctionals",
    "PdfFunctionals",
    "pdf_functionals_of",
    "BandwidthSource",
    "BandwidthLaw",
    "Bandwidth",
    "squared_bias_density",
    "functionals_of",
    "optimal_bandwidth",
    "pdf_law_bandwidth",
    "moment_fit",
    "rule_of_thumb",
    "ALPHA_FLOOR",
]

ALPHA_FLOOR = 2.6
_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class DensityFunctionals:
    I1: float
    I2: float

    def __post_init__(self):
        if not (self.I1 > 0 and math.isfinite(self.I1)):
            raise DomainError(f"I1 must be positive and finite, got {self.I1}")
        if not (self.I2 > 0 and math.isfinite(self.I2)):
            raise DomainError(f"I2 must be positive and finite, got {self.I2}")

    @property
    def T(self) -> float:
        return 3.0 * self.I1 / (_SQRT_PI * self.I2)


@dataclass(frozen=True)
class PdfFunctionals:
    """Constants of the density-estimation bandwidth."""

    J1: float
    J2: float

    def __post_init__(self):
        if not (self.J1 > 0 and math.isfinite(self.J1)):
            raise DomainError(f"J1 must be positive and finite, got {self.J1}")
        if not (self.J2 > 0 and math.isfinite(self.J2)):
            raise DomainError(f"J2 must be positive and finite, got {self.J2}")

    @property
    def T(self) -> float:
        return self.J1 / (2.0 * _SQRT_PI * self.J2)


class BandwidthSource(enum.Enum):
    EXPLICIT = "explicit"
    RULE_OF_THUMB = "rule-of-thumb"
    FUNCTIONALS = "functionals"


class BandwidthLaw(enum.Enum):
    #: b ~ n^(-2/7), minimises the derivative MISE
    DERIVATIVE = "derivative"
    #: b ~ n^(-2/5) with the density-estimation constants (comparison only)
    PDF = "pdf"


@dataclass(frozen=True)
class Bandwidth:
    value: float
    n: int
    source: BandwidthSource = BandwidthSource.EXPLICIT
    functionals: Optional[DensityFunctionals | PdfFunctionals] = None
    reference: Optional[Gamma] = None
    alpha_moment: Optional[float] = None
    law: BandwidthLaw = BandwidthLaw.DERIVATIVE

    def __post_init__(self):
        if not (self.value > 0 and math.isfinite(self.value)):
            raise DomainError(f"bandwidth must be positive, got {self.value}")

    @property
    def clamped(self) -> bool:
        return self.alpha_moment is not None and self.alpha_moment < ALPHA_FLOOR

    def __float__(self) -> float:
        return self.value


def squared_bias_density(dist: ReferenceDistribution, x):
    """``(f(x) / (3 x^2) + f''(x))^2``."""
    inner = dist.pdf(x) / (3.0 * x * x) + dist.pdf_second_derivative(x)
    return inner * inner


def functionals_of(dist: ReferenceDistribution) -> DensityFunctionals:
    """Evaluate ``I1`` and ``I2`` for a reference density.

    ``I1`` is integrated from the origin, which is where its closed forms
    live; ``I2`` from ``1e-6``.  Both run up to the ``1 - 1e-9`` quantile.

    Raises
    ------
    DivergedFunctionalError
        If ``x^(-3/2) f`` is not integrable at zero or the quadrature fails.
    """
    if dist.origin_exponent <= 0.5:
        raise DivergedFunctionalError(
            f"I1 = int x^(-3/2) f(x) dx diverges at 0 for {dist.label} "
            f"(f ~ x^{dist.origin_exponent:g})"
        )
    hi = _quad.upper_limit(dist)
    i1 = _quad.integrate_positive(
        lambda x: math.exp(dist.log_pdf(x) - 1.5 * math.log(x)), _quad.ORIGIN, hi, what=f"I1 of {dist.label}"
    )
    i2 = _quad.integrate_positive(
        lambda x: squared_bias_density(dist, x), _quad.LOWER_CUT, hi, what=f"I2 of {dist.label}"
    )
    if not (i1 > 0 and i2 > 0):
        raise DivergedFunctionalError(f"degenerate functionals for {dist.label}: I1={i1}, I2={i2}")
    return DensityFunctionals(i1, i2)


def pdf_functionals_of(dist: ReferenceDistribution) -> PdfFunctionals:
    """``J1 = int x^(-1/2) f`` (from the origin) and ``J2 = int (x f'')^2`` (from ``1e-6``)."""
    if dist.origin_exponent <= -0.5:
        raise DivergedFunctionalError(f"J1 = int x^(-1/2) f(x) dx diverges at 0 for {dist.label}")
    hi = _quad.upper_limit(dist)
    j1 = _quad.integrate_positive(
        lambda x: math.exp(dist.log_pdf(x) - 0.5 * math.log(x)), _quad.ORIGIN, hi, what=f"J1 of {dist.label}"
    )
    j2 = _quad.integrate_positive(
        lambda x: (x * dist.pdf_second_derivative(x)) ** 2, _quad.LOWER_CUT, hi, what=f"J2 of {dist.label}"
    )
    return PdfFunctionals(j1, j2)


def optimal_bandwidth(fun: DensityFunctionals, n: int) -> Bandwidth:
    """``(T / n) ** (2/7)``."""
    if n < 2:
        raise DomainError("sample size must be at least 2")
    return Bandwidth((fun.T / n) ** (2.0 / 7.0), int(n), BandwidthSource.FUNCTIONALS, fun)


def pdf_law_bandwidth(fun: PdfFunctionals, n: int) -> Bandwidth:
    """``(T2 / n) ** (2/5)``: the density-estimation bandwidth, kept for comparisons."""
    if n < 2:
        raise DomainError("sample size must be at least 2")
    return Bandwidth(
        (fun.T / n) ** (2.0 / 5.0), int(n), BandwidthSource.FUNCTIONALS, fun, law=BandwidthLaw.PDF
    )


def moment_fit(s: Sample) -> tuple[float, float]:
    """Method-of-moments gamma fit ``(alpha, beta)`` with population variance."""
    v = s.values
    mean = math.fsum(v) / v.size
    var = math.fsum((v - mean) ** 2) / v.size
    if not var > 0:
        raise DegenerateSampleError("sample variance is zero; cannot fit a reference density")
    return mean * mean / var, var / mean


def rule_of_thumb(s: Sample, law: BandwidthLaw = BandwidthLaw.DERIVATIVE) -> Bandwidth:
    """Bandwidth from a moment-fitted gamma reference density.

    The fitted shape is raised to at least ``ALPHA_FLOOR`` so that ``I1``
    stays finite.
    """
    alpha, beta = moment_fit(s)
    if s.n < 2:
        raise DegenerateSampleError("rule of thumb needs at least two observations")
    ref = Gamma(max(alpha, ALPHA_FLOOR), beta)
    if BandwidthLaw(law) is BandwidthLaw.DERIVATIVE:
        base = optimal_bandwidth(functionals_of(ref), s.n)
    else:
        base = pdf_law_bandwidth(pdf_functionals_of(ref), s.n)
    return Bandwidth(base.value, s.n, BandwidthSource.RULE_OF_THUMB, base.functionals, ref, alpha, base.law)
