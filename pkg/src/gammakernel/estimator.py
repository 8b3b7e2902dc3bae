"""Gamma-kernel estimators of a density and its first derivative.

Sums over observations run through the sample in ascending order with
compensated (TwoSum) accumulation, one accumulator per grid point.  The
result therefore does not depend on the order of the input, on chunking, or
on how grid points are spread over workers.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from .errors import DomainError, IngestionError, UsageError
from .kernel import kernel_matrices, shape_value

__all__ = [
    "SampleMode",
    "Sample",
    "EvalGrid",
    "Which",
    "read_sample",
    "parse_sample_text",
    "default_grid",
    "density_estimate",
    "derivative_estimate",
    "estimate_on_grid",
]

_CHUNK_ELEMENTS = 1 << 21


class SampleMode(enum.Enum):
    IID = "iid"
    DEPENDENT = "dependent"


class Which(enum.Enum):
    DENSITY = "density"
    DERIVATIVE = "derivative"


@dataclass(frozen=True, eq=False)
class Sample:
    """Strictly positive observations plus where they came from."""

    values: np.ndarray
    mode: SampleMode = SampleMode.IID
    seed_info: Optional[dict] = field(default=None)

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size == 0:
            raise UsageError("empty sample")
        if not np.all(np.isfinite(v)):
            raise IngestionError("sample contains non-finite values")
        bad = np.flatnonzero(v <= 0)
        if bad.size:
            raise IngestionError(
                f"sample values must be strictly positive; "
                f"observation {bad[0]} is {v[bad[0]]!r}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @cached_property
    def sorted_values(self) -> np.ndarray:
        v = np.sort(self.values)
        v.setflags(write=False)
        return v

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n


def parse_sample_text(lines: Iterable[str], mode: SampleMode = SampleMode.IID) -> Sample:
    """One decimal per line; ``#`` starts a comment, blank lines are skipped."""
    vals = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            vals.append(float(text))
        except ValueError:
            raise IngestionError(f"line {lineno}: not a number: {text!r}") from None
        if not vals[-1] > 0 or not math.isfinite(vals[-1]):
            raise IngestionError(f"line {lineno}: observation must be a positive finite number, got {text!r}")
    if not vals:
        raise UsageError("empty sample")
    return Sample(np.asarray(vals), mode)


def read_sample(path: str | os.PathLike, mode: SampleMode = SampleMode.IID) -> Sample:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_sample_text(fh, mode)
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc.strerror or exc}") from exc


@dataclass(frozen=True, eq=False)
class EvalGrid:
    points: np.ndarray
    lower_cut: float
    upper_cut: float

    def __post_init__(self):
        p = np.array(self.points, dtype=float).ravel()
        lo, hi = float(self.lower_cut), float(self.upper_cut)
        if not (lo > 0 and hi > lo):
            raise DomainError("grid cuts must satisfy 0 < lower_cut < upper_cut")
        if p.size == 0:
            raise DomainError("grid must contain at least one point")
        if p.size > 1 and np.any(np.diff(p) <= 0):
            raise DomainError("grid points must be strictly increasing")
        if p[0] < lo or p[-1] > hi:
            raise DomainError("grid points must lie within [lower_cut, upper_cut]")
        p.setflags(write=False)
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "lower_cut", lo)
        object.__setattr__(self, "upper_cut", hi)

    @classmethod
    def linspace(cls, lower: float, upper: float, num: int = 512) -> "EvalGrid":
        if num < 2:
            raise DomainError("a grid needs at least two points")
        pts = np.linspace(lower, upper, int(num))
        pts[-1] = upper
        return cls(pts, lower, upper)

    def __len__(self) -> int:
        return int(self.points.size)


def default_grid(
    s: Sample, num: int = 512, upper_q: float = 0.999, lower_floor: float = 1e-3
) -> EvalGrid:
    """Equally spaced grid from ``max(1e-3, min/2)`` to the empirical ``upper_q`` quantile."""
    lo = max(lower_floor, 0.5 * float(s.values.min()))
    hi = float(np.quantile(s.values, upper_q))
    if not hi > lo:
        raise UsageError(
            f"sample range too narrow for a grid: lower cut {lo:g} >= upper cut {hi:g}"
        )
    return EvalGrid.linspace(lo, hi, num)


def _average(s: Sample, b: float, x, derivative: bool):
    x_arr = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    shape_value(x_arr, b)  # validates b and x
    data = s.sorted_values
    total = np.zeros(x_arr.size)
    comp = np.zeros(x_arr.size)
    t = np.empty(x_arr.size)
    bp = np.empty(x_arr.size)
    err = np.empty(x_arr.size)
    step = max(1, _CHUNK_ELEMENTS // x_arr.size)
    for start in range(0, data.size, step):
        # columns follow the data so each observation's terms are contiguous
        block = np.ascontiguousarray(kernel_matrices(x_arr, b, data[start : start + step], derivative).T)
        for v in block:
            # Knuth TwoSum: total + v == t + err exactly
            np.add(total, v, out=t)
            np.subtract(t, total, out=bp)
            np.subtract(t, bp, out=err)
            np.subtract(total, err, out=err)
            np.subtract(v, bp, out=bp)
            np.add(err, bp, out=err)
            comp += err
            total, t = t, total
    out = (total + comp) / data.size
    if np.ndim(x) == 0:
        return float(out[0])
    return out.reshape(np.shape(x))


def density_estimate(s: Sample, b: float, x):
    """Mean of ``K_{rho_b(x), b}(X_i)`` over the sample."""
    return _average(s, b, x, derivative=False)


def derivative_estimate(s: Sample, b: float, x):
    """Mean of the x-derivative of the kernel over the sample."""
    return _average(s, b, x, derivative=True)


def estimate_on_grid(s: Sample, b: float, g: EvalGrid, which: Which = Which.DERIVATIVE) -> np.ndarray:
    """Return a ``(len(g), 2)`` array of ``(x, estimate)`` rows in grid order."""
    fn = derivative_estimate if Which(which) is Which.DERIVATIVE else density_estimate
    vals = fn(s, b, g.points)
    return np.column_stack([g.points, vals])
