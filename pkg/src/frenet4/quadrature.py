"""Antiderivatives, derivatives and constant fitting for sampled scalar functions.

Everything here works on a uniform grid ``s_i = s0 + i*h``.  The cumulative
integral uses composite Simpson and the derivative uses fourth-order
stencils, so the two are consistent to O(h^4) when composed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidBracket, TooFewSamples

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SampledFunction:
    """Real values on the uniform grid ``s0 + i*h``."""

    s0: float
    h: float
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if not self.h > 0:
            raise ValueError(f"grid step must be positive, got {self.h}")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def s(self) -> np.ndarray:
        return self.s0 + self.h * np.arange(self.n)

    def __len__(self):
        return self.n

    def trim(self, k: int) -> "SampledFunction":
        """Drop ``k`` samples from each end."""
        if k == 0:
            return self
        return SampledFunction(self.s0 + k * self.h, self.h, self.values[k:-k])

    def with_values(self, values) -> "SampledFunction":
        return SampledFunction(self.s0, self.h, values)


def cumulative_simpson(y: np.ndarray, h: float) -> np.ndarray:
    """Cumulative integral of uniformly sampled ``y`` starting from 0.

    Even nodes get composite Simpson; each odd node adds one more interval
    with the cubic-interpolation rule, so the result is exact for cubics.
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    out = np.zeros_like(y)
    if n < 2:
        return out
    if n == 2:
        out[1] = 0.5 * h * (y[0] + y[1])
        return out
    if n == 3:
        out[1] = h / 12.0 * (5 * y[0] + 8 * y[1] - y[2])
        out[2] = h / 3.0 * (y[0] + 4 * y[1] + y[2])
        return out

    panels = h / 3.0 * (y[0:-2:2] + 4.0 * y[1:-1:2] + y[2::2])
    out[2::2] = np.cumsum(panels)
    out[1] = h / 24.0 * (9 * y[0] + 19 * y[1] - 5 * y[2] + y[3])
    # odd nodes i >= 3: Simpson up to i-1 plus the last interval from the
    # cubic through samples i-3..i
    i = np.arange(3, n, 2)
    out[i] = out[i - 1] + h / 24.0 * (y[i - 3] - 5 * y[i - 2] + 19 * y[i - 1] + 9 * y[i])
    return out


def antiderivative(f: SampledFunction, c0: float = 0.0) -> SampledFunction:
    """Antiderivative of ``f`` taking the value ``c0`` at the left endpoint."""
    return f.with_values(cumulative_simpson(f.values, f.h) + c0)


def derivative_values(y: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order derivative of uniformly sampled ``y`` (needs >= 5 samples)."""
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if n < 5:
        raise TooFewSamples(f"derivative needs at least 5 samples, got {n}")
    d = np.empty_like(y)
    d[2:-2] = (y[:-4] - 8.0 * y[1:-3] + 8.0 * y[3:-1] - y[4:]) / (12.0 * h)
    d[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / (12.0 * h)
    d[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / (12.0 * h)
    d[-1] = (25 * y[-1] - 48 * y[-2] + 36 * y[-3] - 16 * y[-4] + 3 * y[-5]) / (12.0 * h)
    d[-2] = (3 * y[-1] + 10 * y[-2] - 18 * y[-3] + 6 * y[-4] - y[-5]) / (12.0 * h)
    return d


def derivative(f: SampledFunction) -> SampledFunction:
    """Derivative of ``f`` with O(h^4) stencils everywhere, one-sided at the ends."""
    return f.with_values(derivative_values(f.values, f.h))


def golden_section(objective: Callable[[float], float], lo: float, hi: float,
                   tol: float) -> tuple[float, float]:
    """Golden-section minimization of ``objective`` on ``[lo, hi]`` down to width ``tol``."""
    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = objective(x1), objective(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = objective(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = objective(x2)
    x = 0.5 * (a + b)
    fx = objective(x)
    return min([(fx, x), (f1, x1), (f2, x2)])[::-1]


def fit_integration_constant(objective: Callable[[float], float], bracket,
                             coarse: int = 16, rtol: float = 1e-10) -> tuple[float, float]:
    """Minimize a nonnegative ``objective`` over the constant ``c0`` in ``bracket``.

    The objective is not assumed unimodal: it is first scanned on ``coarse``
    equispaced points and golden-section search then refines around the best.
    Returns ``(c0, objective(c0))``.
    """
    c_lo, c_hi = map(float, bracket)
    if not c_lo < c_hi:
        raise InvalidBracket(f"need c_lo < c_hi, got [{c_lo}, {c_hi}]")
    grid = np.linspace(c_lo, c_hi, coarse)
    values = np.array([objective(c) for c in grid])
    k = int(np.argmin(values))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, coarse - 1)]
    c, v = golden_section(objective, lo, hi, rtol * (c_hi - c_lo))
    if values[k] < v:
        return float(grid[k]), float(values[k])
    return float(c), float(v)
