"""Gamma kernel with a position-dependent shape and its derivative in x.

For an evaluation point ``x`` and bandwidth ``b`` the kernel is the
Gamma(rho, b) density in the data argument ``t``, where

    rho = x / b                   if x >= 2b   (interior branch)
    rho = (x / (2b))**2 + 1       if x <  2b   (boundary branch)

Everything is evaluated in log space; only the final value is exponentiated,
so shapes of order 1e6 are fine.  All functions broadcast over ``x`` and
``t``; ``b`` is a scalar.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .special import digamma, ln_gamma

__all__ = [
    "Branch",
    "ShapeParam",
    "KernelPoint",
    "MAX_SHAPE",
    "shape_param",
    "shape_value",
    "gamma_kernel",
    "log_correction",
    "gamma_kernel_derivative",
    "kernel_point_values",
]

MAX_SHAPE = 1e8


class Branch(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class ShapeParam:
    branch: Branch
    value: float


@dataclass(frozen=True)
class KernelPoint:
    """A single (x, b, t) evaluation triple."""

    x: float
    b: float
    t: float

    def __post_init__(self):
        if not self.b > 0:
            raise DomainError(f"bandwidth must be positive, got {self.b}")
        if not self.x >= 0:
            raise DomainError(f"evaluation point must be nonnegative, got {self.x}")
        if not self.t >= 0:
            raise DomainError(f"data argument must be nonnegative, got {self.t}")


def _check_b(b: float) -> float:
    b = float(b)
    if not (b > 0 and math.isfinite(b)):
        raise DomainError(f"bandwidth must be positive and finite, got {b}")
    return b


def shape_value(x, b: float) -> np.ndarray:
    """Vectorised shape parameter; returns ``(rho, interior_mask)``."""
    b = _check_b(b)
    x = np.asarray(x, dtype=float)
    if np.any(~(x >= 0)):
        raise DomainError("evaluation points must be nonnegative")
    interior = x >= 2.0 * b
    rho = np.where(interior, x / b, (x / (2.0 * b)) ** 2 + 1.0)
    if np.any(rho > MAX_SHAPE):
        raise DomainError(
            f"kernel shape x/b exceeds the supported maximum {MAX_SHAPE:g}"
        )
    return rho, interior


def shape_param(x: float, b: float) -> ShapeParam:
    rho, interior = shape_value(x, b)
    return ShapeParam(
        Branch.INTERIOR if bool(interior) else Branch.BOUNDARY, float(rho)
    )


def _check_t(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(~(t >= 0)) or not np.all(np.isfinite(t)):
        raise DomainError("data argument must be nonnegative and finite")
    return t


def _log_kernel(rho, log_t, t, b, lgam_rho):
    return (rho - 1.0) * log_t - t / b - rho * math.log(b) - lgam_rho


def _kernel_from_parts(rho, t, b, lgam_rho):
    with np.errstate(divide="ignore"):
        log_t = np.log(t)
    pos = t > 0
    safe_log_t = np.where(pos, log_t, 0.0)
    val = np.exp(_log_kernel(rho, safe_log_t, t, b, lgam_rho))
    # t == 0: density limit is 1/b for rho == 1, zero otherwise
    at_zero = np.where(rho == 1.0, 1.0 / b, 0.0)
    return np.where(pos, val, at_zero), safe_log_t, pos


def gamma_kernel(x, b: float, t):
    """Kernel value ``K_{rho_b(x), b}(t)``.

    Parameters
    ----------
    x : float or array_like
        Evaluation point(s) on the semi-axis.
    b : float
        Bandwidth.
    t : float or array_like
        Data argument(s); broadcast against ``x``.
    """
    rho, _ = shape_value(x, b)
    t = _check_t(t)
    val, _, _ = _kernel_from_parts(rho, t, b, ln_gamma(rho))
    return float(val) if np.ndim(val) == 0 else val


def log_correction(x, b: float, t):
    """``ln t - ln b - digamma(rho_b(x))`` for ``t > 0``."""
    rho, _ = shape_value(x, b)
    t = _check_t(t)
    if np.any(t == 0):
        raise DomainError("log correction is undefined at t = 0")
    out = np.log(t) - math.log(b) - digamma(rho)
    return float(out) if np.ndim(out) == 0 else out


def _prefactor(x, rho_interior, b):
    return np.where(rho_interior, 1.0 / b, x / (2.0 * b * b))


def gamma_kernel_derivative(x, b: float, t):
    """Partial derivative of the kernel with respect to ``x``.

    Interior branch: ``K * L / b``; boundary branch: ``x / (2 b^2) * K * L``.
    At ``x == 2b`` the interior formula is used.  At ``t == 0`` the value is
    taken as its limit, which is zero.
    """
    rho, interior = shape_value(x, b)
    t = _check_t(t)
    x = np.asarray(x, dtype=float)
    k, log_t, pos = _kernel_from_parts(rho, t, b, ln_gamma(rho))
    corr = log_t - math.log(b) - digamma(rho)
    out = np.where(pos, _prefactor(x, interior, b) * k * corr, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def kernel_point_values(p: KernelPoint) -> tuple[float, float, float]:
    """Return ``(K, L, K')`` at one :class:`KernelPoint` (``t > 0``)."""
    return (
        gamma_kernel(p.x, p.b, p.t),
        log_correction(p.x, p.b, p.t),
        gamma_kernel_derivative(p.x, p.b, p.t),
    )


def kernel_matrices(x: np.ndarray, b: float, data: np.ndarray, derivative: bool):
    """Kernel (or derivative kernel) values on the outer grid ``x`` by ``data``.

    ``data`` must be strictly positive; rows follow ``x``.  Shape-dependent
    special functions are evaluated once per grid point.
    """
    rho, interior = shape_value(x, b)
    rho = np.atleast_1d(rho)[:, None]
    log_t = np.log(data)[None, :]
    lgam = np.atleast_1d(ln_gamma(rho[:, 0]))[:, None]
    k = np.exp(_log_kernel(rho, log_t, data[None, :], b, lgam))
    if not derivative:
        return k
    psi = np.atleast_1d(digamma(rho[:, 0]))[:, None]
    pref = np.atleast_1d(_prefactor(np.asarray(x, dtype=float), interior, b))[:, None]
    return pref * k * (log_t - math.log(b) - psi)
