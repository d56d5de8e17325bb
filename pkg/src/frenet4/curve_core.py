"""Sampled unit-speed curves in R^4 and their Frenet apparatus.

A curve is stored as positions on a uniform arclength grid.  Derivatives are
taken with central finite-difference stencils; the moving frame
``(T, N, B1, B2)`` comes from Gram-Schmidt on the first four derivatives and
the curvatures are read off as projections of the frame derivatives,

    kappa1 = <T', N>,   kappa2 = <N', B1>,   kappa3 = <B1', B2>,

which keeps the sign of ``kappa3`` (``B2`` is oriented so the frame is
right-handed).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from .quadrature import derivative_values
from .errors import (
    CurvatureVanishes,
    DegenerateInput,
    IndexOutOfRange,
    NotUnitSpeed,
    RankDeficient,
    StencilUnavailable,
    TooFewSamples,
)

MIN_SAMPLES = 9
# stencil half-width used by frenet_apparatus (9-point stencils)
APPARATUS_HALF_WIDTH = 4
# node spacing, in length units, the apparatus stencils aim for; the fourth
# derivative loses ~eps/H^4 to rounding so the native grid step is too fine
DEFAULT_SPACING = 0.02


class BoundaryStencilWarning(UserWarning):
    """A one-sided stencil was used; accuracy is lower than in the interior."""


@dataclass(frozen=True)
class CurveSample:
    """Positions ``points[i]`` of a curve at arclength ``s0 + i*h``."""

    s0: float
    h: float
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 4:
            raise ValueError(f"points must have shape (n, 4), got {pts.shape}")
        if not self.h > 0:
            raise ValueError(f"grid step must be positive, got {self.h}")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def s(self) -> np.ndarray:
        return self.s0 + self.h * np.arange(self.n)

    @property
    def length(self) -> float:
        return self.h * (self.n - 1)


@dataclass(frozen=True)
class FrenetApparatus:
    """Frames and curvatures on a uniform grid.

    ``frames[i]`` is a 4x4 array whose rows are T, N, B1, B2 at sample i,
    ``kappas[i]`` holds (kappa1, kappa2, kappa3).  ``offset`` is the index of
    the first sample in the grid of the curve the apparatus came from.
    """

    s0: float
    h: float
    frames: np.ndarray
    kappas: np.ndarray
    offset: int = 0

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=float)
        kappas = np.asarray(self.kappas, dtype=float)
        if frames.ndim != 3 or frames.shape[1:] != (4, 4):
            raise ValueError(f"frames must have shape (n, 4, 4), got {frames.shape}")
        if kappas.shape != (frames.shape[0], 3):
            raise ValueError("kappas must have shape (n, 3) matching frames")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "kappas", kappas)

    @property
    def n(self) -> int:
        return self.frames.shape[0]

    @property
    def s(self) -> np.ndarray:
        return self.s0 + self.h * np.arange(self.n)

    @property
    def T(self):
        return self.frames[:, 0]

    @property
    def N(self):
        return self.frames[:, 1]

    @property
    def B1(self):
        return self.frames[:, 2]

    @property
    def B2(self):
        return self.frames[:, 3]

    @property
    def kappa1(self):
        return self.kappas[:, 0]

    @property
    def kappa2(self):
        return self.kappas[:, 1]

    @property
    def kappa3(self):
        return self.kappas[:, 2]

    def orthonormality_defect(self) -> float:
        gram = np.einsum("nik,njk->nij", self.frames, self.frames)
        return float(np.max(np.abs(gram - np.eye(4))))

    def decimate(self, k: int) -> "FrenetApparatus":
        """Every ``k``-th sample, on the correspondingly coarser grid."""
        if k == 1:
            return self
        return FrenetApparatus(self.s0, self.h * k, self.frames[::k], self.kappas[::k],
                               self.offset)

    def flipped(self) -> "FrenetApparatus":
        """Same curve with the opposite orientation of B2 (so kappa3 changes sign)."""
        frames = self.frames.copy()
        frames[:, 3] *= -1.0
        kappas = self.kappas.copy()
        kappas[:, 2] *= -1.0
        return FrenetApparatus(self.s0, self.h, frames, kappas, self.offset)


# ---------------------------------------------------------------------------
# finite-difference stencils


@lru_cache(maxsize=None)
def fd_weights(order: int, offsets: tuple[int, ...]) -> tuple[Fraction, ...]:
    """Exact weights of the ``order``-th derivative at 0 on integer ``offsets``.

    Fornberg's recursion, carried out in rational arithmetic.
    """
    x = [Fraction(o) for o in offsets]
    npts = len(x)
    if order >= npts:
        raise ValueError(f"{npts} nodes cannot resolve derivative of order {order}")
    c = [[Fraction(0)] * (order + 1) for _ in range(npts)]
    c[0][0] = Fraction(1)
    c1 = Fraction(1)
    c4 = x[0]
    for i in range(1, npts):
        mn = min(i, order)
        c2 = Fraction(1)
        c5 = c4
        c4 = x[i]
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2
            for k in range(mn, 0, -1):
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3
            c[j][0] = c4 * c[j][0] / c3
        c1 = c2
    return tuple(c[j][order] for j in range(npts))


def default_accuracy(order: int) -> int:
    return 4 if order <= 2 else 2


def central_half_width(order: int, accuracy: int) -> int:
    if accuracy % 2:
        raise ValueError("central stencils have even accuracy")
    return (order - 1) // 2 + accuracy // 2


def central_stencil(order: int, half_width: int) -> tuple[np.ndarray, np.ndarray]:
    offsets = tuple(range(-half_width, half_width + 1))
    return np.array(offsets), np.array([float(w) for w in fd_weights(order, offsets)])


def apply_central(values: np.ndarray, order: int, h: float, half_width: int,
                  stride: int = 1) -> np.ndarray:
    """Central differences of ``values`` along axis 0 at every interior sample.

    The stencil nodes are ``stride`` samples apart, so the result covers
    indices ``r .. n-1-r`` with ``r = half_width * stride``.
    """
    offsets, weights = central_stencil(order, half_width)
    r = half_width * stride
    n = values.shape[0]
    if n <= 2 * r:
        raise TooFewSamples(f"{n} samples cannot hold a stencil of reach {r}")
    out = np.zeros((n - 2 * r,) + values.shape[1:])
    for o, w in zip(offsets, weights):
        if w != 0.0:
            out += w * values[r + o * stride: n - r + o * stride]
    return out / (stride * h) ** order


def derivatives(curve: CurveSample, i: int, order: int, accuracy: int | None = None,
                stride: int = 1, one_sided: bool = True) -> np.ndarray:
    """Finite-difference estimate of the ``order``-th derivative at sample ``i``.

    Defaults to fourth-order accuracy for first and second derivatives and
    second-order for third and fourth.  Near the boundary a one-sided stencil
    of the same formal order is used (with a :class:`BoundaryStencilWarning`)
    unless ``one_sided`` is False, in which case :class:`StencilUnavailable`
    is raised.
    """
    if order not in (1, 2, 3, 4):
        raise ValueError(f"order must be 1..4, got {order}")
    n = curve.n
    if not 0 <= i < n:
        raise IndexOutOfRange(f"sample {i} outside 0..{n - 1}")
    p = default_accuracy(order) if accuracy is None else accuracy
    m = central_half_width(order, p)
    if m * stride <= i < n - m * stride:
        offsets = tuple(range(-m, m + 1))
    else:
        if not one_sided:
            raise StencilUnavailable(
                f"central stencil of half-width {m * stride} does not fit at sample {i}"
            )
        npts = order + p
        if npts * stride > n:
            raise TooFewSamples(f"{n} samples cannot hold a {npts}-point stencil")
        first = min(max(i - (npts // 2) * stride, 0), n - 1 - (npts - 1) * stride)
        lead = (i - first) // stride
        offsets = tuple(range(-lead, npts - lead))
        if (i - first) % stride:
            raise StencilUnavailable("boundary stencil misaligned with the stride")
        warnings.warn(
            f"one-sided stencil at sample {i}; lower accuracy", BoundaryStencilWarning,
            stacklevel=2,
        )
    w = np.array([float(x) for x in fd_weights(order, offsets)])
    idx = i + stride * np.array(offsets)
    return w @ curve.points[idx] / (stride * curve.h) ** order


# ---------------------------------------------------------------------------
# orthonormalization


def gram_schmidt_batch(vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Classical Gram-Schmidt with one re-orthogonalization pass.

    ``vectors`` has shape (m, k, d): m independent sets of k row vectors.
    Returns orthonormal rows of the same shape and the residual norms
    (m, k) measured just before each normalization.
    """
    v = np.asarray(vectors, dtype=float)
    q = np.zeros_like(v)
    res = np.zeros(v.shape[:2])
    for i in range(v.shape[1]):
        w = v[:, i].copy()
        if i:
            basis = q[:, :i]
            for _ in range(2):
                coef = np.einsum("mjd,md->mj", basis, w)
                w -= np.einsum("mj,mjd->md", coef, basis)
        norm = np.linalg.norm(w, axis=1)
        res[:, i] = norm
        with np.errstate(invalid="ignore", divide="ignore"):
            q[:, i] = w / norm[:, None]
    return q, res


def gram_schmidt4(v1, v2, v3, v4, tol_rank: float | None = None):
    """Orthonormalize four vectors of R^4.

    Returns ``(q, residuals)`` where ``q`` is a 4x4 array with the orthonormal
    vectors as rows.  Raises :class:`RankDeficient` when a residual drops
    below ``tol_rank`` (default ``1e-10`` times the largest input norm).
    """
    v = np.array([v1, v2, v3, v4], dtype=float)
    if tol_rank is None:
        tol_rank = 1e-10 * np.max(np.linalg.norm(v, axis=1))
    q, res = gram_schmidt_batch(v[None])
    for i, r in enumerate(res[0]):
        if not r >= tol_rank:
            raise RankDeficient(i + 1, float(r), float(tol_rank))
    return q[0], res[0]


# ---------------------------------------------------------------------------
# frame construction


def apparatus_stride(h: float, n: int) -> int:
    """Stencil stride for frenet_apparatus: nodes ~DEFAULT_SPACING apart, if n allows."""
    stride = max(1, int(round(DEFAULT_SPACING / h)))
    # keep at least a handful of samples after the two nested stencils
    fit = (n - 9) // (4 * APPARATUS_HALF_WIDTH)
    return max(1, min(stride, fit))


def frenet_apparatus(curve: CurveSample, stride: int | None = None,
                     kappa_min: float | None = None,
                     speed_tol: float = 1e-5) -> FrenetApparatus:
    """Frenet frames and curvatures of a unit-speed sampled curve.

    The curve derivatives and the frame derivatives both use 9-point central
    stencils with nodes ``stride`` samples apart, so ``8*stride`` samples are
    trimmed from each end.  Curvatures below ``kappa_min`` in magnitude
    (default ``1e-8/h``) raise :class:`CurvatureVanishes`.
    """
    n, h = curve.n, curve.h
    if n < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {n}")
    if stride is None:
        stride = apparatus_stride(h, n)
    if kappa_min is None:
        kappa_min = 1e-8 / h
    m = APPARATUS_HALF_WIDTH
    r = m * stride
    if n <= 4 * r:
        raise TooFewSamples(f"{n} samples are too few for stride {stride}")

    d = np.stack([apply_central(curve.points, k, h, m, stride) for k in (1, 2, 3, 4)],
                 axis=1)
    speed = np.linalg.norm(d[:, 0], axis=1)
    bad = np.flatnonzero(np.abs(speed - 1.0) > speed_tol)
    if bad.size:
        j = bad[0]
        raise NotUnitSpeed(
            f"speed {speed[j]:.8f} at sample {j + r} deviates from 1 by more than "
            f"{speed_tol:g}; reparameterize by arclength first"
        )

    frames, res = gram_schmidt_batch(d)
    tol = 1e-10 * np.max(np.linalg.norm(d, axis=2), axis=1)
    for k in range(1, 4):
        bad = np.flatnonzero(~(res[:, k] >= tol))
        if bad.size:
            raise CurvatureVanishes(k, int(bad[0] + r), float(res[bad[0], k]), float(tol[bad[0]]))
    flip = np.linalg.det(frames) < 0
    frames[flip, 3] *= -1.0

    dframes = apply_central(frames[:, :3], 1, h, m, stride)
    frames = frames[r:-r]
    kappas = np.stack([
        np.einsum("nd,nd->n", dframes[:, 0], frames[:, 1]),
        np.einsum("nd,nd->n", dframes[:, 1], frames[:, 2]),
        np.einsum("nd,nd->n", dframes[:, 2], frames[:, 3]),
    ], axis=1)
    offset = 2 * r
    for k in range(3):
        bad = np.flatnonzero(~(np.abs(kappas[:, k]) >= kappa_min))
        if bad.size:
            j = bad[0]
            raise CurvatureVanishes(k + 1, int(j + offset), float(kappas[j, k]), kappa_min)
    return FrenetApparatus(curve.s0 + offset * h, h, frames, kappas, offset)


# ---------------------------------------------------------------------------
# arclength reparameterization

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def _arc_integral(spline, a, b):
    """Length of the spline between parameters a and b (arrays), Gauss-Legendre."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    u = mid[..., None] + half[..., None] * _GL_X
    speed = np.linalg.norm(spline(u, 1), axis=-1)
    return half * (speed @ _GL_W)


def arclength_reparam(points, s0: float = 0.0, newton_steps: int = 6) -> CurveSample:
    """Resample an ordered point sequence on a uniform arclength grid.

    The points are interpolated by a cubic spline in cumulative chord
    length; the arclength of that spline is integrated per segment and the
    uniform targets are located by a monotone cubic guess polished with
    Newton steps.  The output has as many samples as the input.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 4:
        raise ValueError(f"points must have shape (n, 4), got {pts.shape}")
    n = pts.shape[0]
    if n < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {n}")
    chords = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    bad = np.flatnonzero(chords <= 1e-12)
    if bad.size:
        raise DegenerateInput(f"samples {bad[0]} and {bad[0] + 1} coincide")
    u = np.concatenate([[0.0], np.cumsum(chords)])
    spline = CubicSpline(u, pts, axis=0)
    seg = _arc_integral(spline, u[:-1], u[1:])
    arc = np.concatenate([[0.0], np.cumsum(seg)])
    length = arc[-1]

    target = np.linspace(0.0, length, n)
    t = PchipInterpolator(arc, u)(target)
    for _ in range(newton_steps):
        k = np.clip(np.searchsorted(u, t, side="right") - 1, 0, n - 2)
        g = arc[k] + _arc_integral(spline, u[k], t) - target
        t = t - g / np.linalg.norm(spline(t, 1), axis=1)
    t[0], t[-1] = u[0], u[-1]
    out = spline(t)
    out[0], out[-1] = pts[0], pts[-1]
    return CurveSample(s0, length / (n - 1), out)


def unit_speed_check(curve: CurveSample) -> np.ndarray:
    """Finite-difference speed at every sample (fourth-order stencils)."""
    return np.linalg.norm(
        np.stack([derivative_values(curve.points[:, k], curve.h) for k in range(4)], axis=1),
        axis=1,
    )


# ---------------------------------------------------------------------------
# analytic test curves


def wcurve_points(a: float, p: float, b: float, q: float, s) -> np.ndarray:
    """The torus curve (a cos ps, a sin ps, b cos qs, b sin qs)."""
    s = np.asarray(s, dtype=float)
    return np.stack([a * np.cos(p * s), a * np.sin(p * s),
                     b * np.cos(q * s), b * np.sin(q * s)], axis=-1)


def wcurve_derivative(a, p, b, q, s, order: int) -> np.ndarray:
    """Exact ``order``-th derivative of :func:`wcurve_points`."""
    s = np.asarray(s, dtype=float)
    shift = order * np.pi / 2
    return np.stack([a * p**order * np.cos(p * s + shift), a * p**order * np.sin(p * s + shift),
                     b * q**order * np.cos(q * s + shift), b * q**order * np.sin(q * s + shift)],
                    axis=-1)
