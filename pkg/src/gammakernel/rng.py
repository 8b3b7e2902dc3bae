"""Splittable random streams and the variate transforms built on them.

Every stream is a Philox-4x64 counter-based generator keyed by a
``SeedSequence`` whose spawn key is the stream path, so
``stream(seed, 3, 17)`` is reproducible and independent of
``stream(seed, 3, 18)`` regardless of the order in which streams are made.
Only uniform doubles are taken from numpy; normal and gamma variates are
produced here.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["stream", "uniforms", "open_uniforms", "standard_normals", "standard_gammas"]


def stream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator for ``seed`` and a tuple of nonnegative ints."""
    ss = np.random.SeedSequence(entropy=int(seed) & (2**128 - 1), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))


def uniforms(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform doubles on [0, 1)."""
    return rng.random(n)


def open_uniforms(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform doubles on the open interval (0, 1)."""
    return 1.0 - rng.random(n)  # (0, 1]


def standard_normals(rng: np.random.Generator, n: int) -> np.ndarray:
    """Box-Muller transform of paired uniforms."""
    m = (n + 1) // 2
    u1 = open_uniforms(rng, m)
    u2 = uniforms(rng, m)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2.0 * math.pi * u2), r * np.sin(2.0 * math.pi * u2)])
    return z[:n]


def standard_gammas(rng: np.random.Generator, shape: float, n: int) -> np.ndarray:
    """Gamma(shape, 1) variates by Marsaglia-Tsang squeeze/rejection.

    Shapes below one are boosted: ``G(a) = G(a + 1) * U**(1/a)``.
    """
    if shape <= 0:
        raise ValueError("gamma shape must be positive")
    boost = shape < 1.0
    a = shape + 1.0 if boost else shape
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    filled = 0
    while filled < n:
        need = n - filled
        batch = need + need // 4 + 16
        z = standard_normals(rng, batch)
        u = open_uniforms(rng, batch)
        v = (1.0 + c * z) ** 3
        ok = v > 0
        with np.errstate(invalid="ignore", divide="ignore"):
            accept = ok & (
                (u < 1.0 - 0.0331 * z**4)
                | (np.log(u) < 0.5 * z * z + d * (1.0 - v + np.log(np.where(ok, v, 1.0))))
            )
        got = (d * v)[accept][:need]
        out[filled : filled + got.size] = got
        filled += got.size
    if boost:
        out *= open_uniforms(rng, n) ** (1.0 / shape)
    return out
