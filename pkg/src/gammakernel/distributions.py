"""Reference densities on (0, inf) with analytic first and second derivatives.

Three families are provided: Maxwell(sigma), unit-scale Weibull(s) with
density ``s x^(s-1) exp(-x^s)``, and Gamma(alpha, beta) with ``beta`` the
scale.  Each exposes the pdf and its two derivatives, CDF/survival,
quantiles and an exact sampler driven by :mod:`gammakernel.rng`.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import optimize, special as sps

from . import rng as _rng
from .errors import DomainError, UsageError
from .special import ln_gamma

__all__ = [
    "ReferenceDistribution",
    "Maxwell",
    "Weibull",
    "Gamma",
    "parse_distribution",
    "PAPER_DISTRIBUTIONS",
]


def _positive_x(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("density arguments must be positive")
    return x


def _out(a):
    return float(a) if np.ndim(a) == 0 else a


class ReferenceDistribution(abc.ABC):
    """Common interface; subclasses are frozen dataclasses."""

    #: exponent k with f(x) ~ c x**k as x -> 0
    @property
    @abc.abstractmethod
    def origin_exponent(self) -> float: ...

    @property
    @abc.abstractmethod
    def label(self) -> str: ...

    @property
    @abc.abstractmethod
    def mean(self) -> float: ...

    @abc.abstractmethod
    def _pdf(self, x: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _d1(self, x: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _d2(self, x: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _cdf(self, x: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _sf(self, x: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _draw(self, gen: np.random.Generator, n: int) -> np.ndarray: ...

    @abc.abstractmethod
    def log_pdf_scalar(self, x: float) -> float:
        """Log density at one positive float, without array overhead."""

    def pdf(self, x):
        return _out(self._pdf(_positive_x(x)))

    def log_pdf(self, x):
        with np.errstate(divide="ignore"):
            return _out(np.log(self._pdf(_positive_x(x))))

    def pdf_derivative(self, x):
        return _out(self._d1(_positive_x(x)))

    def pdf_second_derivative(self, x):
        return _out(self._d2(_positive_x(x)))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        pos = np.where(x > 0, x, 1.0)
        return _out(np.where(x > 0, self._cdf(pos), 0.0))

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        pos = np.where(x > 0, x, 1.0)
        return _out(np.where(x > 0, self._sf(pos), 1.0))

    def quantile(self, p: float) -> float:
        """Inverse CDF by bracketing and Brent's method.

        Upper-tail probabilities are solved against the survival function so
        that ``p`` close to one keeps full relative precision in ``1 - p``.
        """
        p = float(p)
        if not 0.0 < p < 1.0:
            raise DomainError(f"probability must lie in (0, 1), got {p}")
        if p <= 0.5:
            fun = lambda x: float(self._cdf(np.asarray(x))) - p  # noqa: E731
        else:
            q = 1.0 - p
            fun = lambda x: q - float(self._sf(np.asarray(x)))  # noqa: E731
        hi = max(self.mean, 1e-300)
        while fun(hi) < 0:
            hi *= 2.0
        lo = hi
        while fun(lo) > 0:
            lo *= 0.5
            if lo < 1e-300:
                return lo
        if lo == hi:
            return hi
        return optimize.brentq(fun, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)

    def sample(self, n: int, seed: int, *stream: int) -> np.ndarray:
        """``n`` i.i.d. draws from the stream ``(seed, *stream)``."""
        if n < 1:
            raise UsageError("sample size must be at least 1")
        return self._draw(_rng.stream(seed, *stream), int(n))


@dataclass(frozen=True)
class Maxwell(ReferenceDistribution):
    sigma: float = 2.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("Maxwell sigma must be positive")

    origin_exponent = 2.0

    @property
    def label(self) -> str:
        return f"maxwell:{self.sigma:g}"

    @property
    def mean(self) -> float:
        return 2.0 * self.sigma * math.sqrt(2.0 / math.pi)

    def _parts(self, x):
        s2 = self.sigma**2
        c = math.sqrt(2.0) / (self.sigma**3 * math.sqrt(math.pi))
        return c * np.exp(-x * x / (2.0 * s2)), x * x / s2

    def _pdf(self, x):
        e, _ = self._parts(x)
        return e * x * x

    def _d1(self, x):
        e, u = self._parts(x)
        return e * x * (2.0 - u)

    def _d2(self, x):
        e, u = self._parts(x)
        return e * (2.0 - 5.0 * u + u * u)

    def _cdf(self, x):
        z = x / self.sigma
        return sps.erf(z / math.sqrt(2.0)) - math.sqrt(2.0 / math.pi) * z * np.exp(-0.5 * z * z)

    def _sf(self, x):
        z = x / self.sigma
        return sps.erfc(z / math.sqrt(2.0)) + math.sqrt(2.0 / math.pi) * z * np.exp(-0.5 * z * z)

    def log_pdf_scalar(self, x: float) -> float:
        c = 0.5 * math.log(2.0 / math.pi) - 3.0 * math.log(self.sigma)
        return c + 2.0 * math.log(x) - x * x / (2.0 * self.sigma**2)

    def _draw(self, gen, n):
        z = _rng.standard_normals(gen, 3 * n).reshape(3, n)
        return self.sigma * np.sqrt(np.sum(z * z, axis=0))


@dataclass(frozen=True)
class Weibull(ReferenceDistribution):
    shape: float = 4.0

    def __post_init__(self):
        if not self.shape > 0:
            raise DomainError("Weibull shape must be positive")

    @property
    def origin_exponent(self) -> float:
        return self.shape - 1.0

    @property
    def label(self) -> str:
        return f"weibull:{self.shape:g}"

    @property
    def mean(self) -> float:
        return math.gamma(1.0 + 1.0 / self.shape)

    def _pdf(self, x):
        s = self.shape
        return s * x ** (s - 1.0) * np.exp(-(x**s))

    def _d1(self, x):
        s = self.shape
        xs = x**s
        return -s * x ** (s - 2.0) * np.exp(-xs) * (s * xs - s + 1.0)

    def _d2(self, x):
        s = self.shape
        xs = x**s
        return s * x ** (s - 3.0) * np.exp(-xs) * (
            (s - 1.0) * (s - 2.0) - 3.0 * s * (s - 1.0) * xs + s * s * xs * xs
        )

    def _cdf(self, x):
        return -np.expm1(-(x**self.shape))

    def _sf(self, x):
        return np.exp(-(x**self.shape))

    def quantile(self, p: float) -> float:
        p = float(p)
        if not 0.0 < p < 1.0:
            raise DomainError(f"probability must lie in (0, 1), got {p}")
        return (-math.log1p(-p)) ** (1.0 / self.shape)

    def log_pdf_scalar(self, x: float) -> float:
        s = self.shape
        return math.log(s) + (s - 1.0) * math.log(x) - x**s

    def _draw(self, gen, n):
        return (-np.log(_rng.open_uniforms(gen, n))) ** (1.0 / self.shape)


@dataclass(frozen=True)
class Gamma(ReferenceDistribution):
    alpha: float = 2.43
    beta: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError("Gamma parameters must be positive")

    @property
    def origin_exponent(self) -> float:
        return self.alpha - 1.0

    @property
    def label(self) -> str:
        return f"gamma:{self.alpha:g},{self.beta:g}"

    @property
    def mean(self) -> float:
        return self.alpha * self.beta

    @cached_property
    def _log_norm(self) -> float:
        return self.alpha * math.log(self.beta) + ln_gamma(self.alpha)

    def _pdf(self, x):
        return np.exp((self.alpha - 1.0) * np.log(x) - x / self.beta - self._log_norm)

    def _d1(self, x):
        # matches x^(a-2) e^(-x/b) (b + x - a b) / (b^(a+1) Gamma(a))
        return self._pdf(x) * ((self.alpha - 1.0) / x - 1.0 / self.beta)

    def _d2(self, x):
        g = (self.alpha - 1.0) / x - 1.0 / self.beta
        return self._pdf(x) * (g * g - (self.alpha - 1.0) / (x * x))

    def _cdf(self, x):
        return sps.gammainc(self.alpha, x / self.beta)

    def _sf(self, x):
        return sps.gammaincc(self.alpha, x / self.beta)

    def log_pdf_scalar(self, x: float) -> float:
        return (self.alpha - 1.0) * math.log(x) - x / self.beta - self._log_norm

    def _draw(self, gen, n):
        return self.beta * _rng.standard_gammas(gen, self.alpha, n)


PAPER_DISTRIBUTIONS = (Gamma(2.43, 1.0), Weibull(4.0), Maxwell(2.0))


def parse_distribution(text: str) -> ReferenceDistribution:
    """Parse ``"maxwell:2"``, ``"weibull:4"`` or ``"gamma:2.43,1"``."""
    name, _, args = text.strip().partition(":")
    name = name.strip().lower()
    try:
        params = [float(a) for a in args.split(",") if a.strip()]
    except ValueError as exc:
        raise UsageError(f"bad distribution parameters in {text!r}") from exc
    try:
        if name == "maxwell" and len(params) <= 1:
            return Maxwell(*params)
        if name == "weibull" and len(params) <= 1:
            return Weibull(*params)
        if name == "gamma" and len(params) <= 2:
            return Gamma(*params)
    except DomainError as exc:
        raise UsageError(f"invalid distribution {text!r}: {exc}") from exc
    raise UsageError(
        f"unknown distribution {text!r}; expected maxwell:SIGMA, weibull:SHAPE or gamma:ALPHA,BETA"
    )
