"""Origin-aware quadrature used for density functionals and MISE terms.

Integrals over ``[lo, hi]`` on the positive axis are taken in ``u = ln x``
so that algebraic behaviour near zero (``x^-3/2``, ``x^-4`` weights) turns
into smooth exponential tails, and the range is split at ``x = 1``.
"""

from __future__ import annotations

import math
import warnings

from scipy import integrate

from .errors import DivergedFunctionalError

EPS_ABS = 1e-9
EPS_REL = 1e-7
LOWER_CUT = 1e-6
TAIL_PROB = 1e-9
# below this the log-variable integrand is negligible for every convergent case
ORIGIN = 1e-300

_FATAL = {1, 3, 4, 5}


def integrate_positive(fn, lo: float, hi: float, *, what: str = "integral",
                       epsabs: float = EPS_ABS, epsrel: float = EPS_REL) -> float:
    """Integrate ``fn(x)`` over ``[lo, hi]`` with ``0 < lo < hi``."""
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")

    def g(u):
        x = math.exp(u)
        return float(fn(x)) * x

    a, b = math.log(lo), math.log(hi)
    pieces = [(a, 0.0), (0.0, b)] if a < 0.0 < b else [(a, b)]
    total = 0.0
    for u0, u1 in pieces:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _err, info, *msg = integrate.quad(
                g, u0, u1, epsabs=epsabs, epsrel=epsrel, limit=400, full_output=1
            )
        ier = _ier(info, msg)
        if ier in _FATAL or not math.isfinite(val):
            raise DivergedFunctionalError(f"{what}: quadrature did not converge ({_text(msg)})")
        total += val
    if not math.isfinite(total):
        raise DivergedFunctionalError(f"{what}: non-finite value")
    return total


def _ier(info, msg):
    # quad(full_output=1) returns (y, abserr, infodict) on success and
    # (y, abserr, infodict, message[, explain]) otherwise
    if not msg:
        return 0
    text = msg[0]
    for code, key in ((1, "maximum number of subdivisions"), (2, "roundoff"),
                      (3, "extremely bad integrand"), (4, "algorithm does not converge"),
                      (5, "divergent")):
        if key in text:
            return code
    return 6


def _text(msg) -> str:
    return msg[0].strip().splitlines()[0] if msg else "unknown"


def upper_limit(dist) -> float:
    """The ``1 - 1e-9`` quantile used as the right end of every functional."""
    return dist.quantile(1.0 - TAIL_PROB)

