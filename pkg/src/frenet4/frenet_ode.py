"""Curves from curvatures: RK4 integration of the Frenet system in R^4.

The moving frame E (rows T, N, B1, B2) obeys ``E' = K(s) E`` with the
skew-symmetric matrix

    [[0,   k1,  0,  0],
     [-k1, 0,  k2,  0],
     [0,  -k2,  0, k3],
     [0,   0, -k3,  0]]

and the curve itself follows ``alpha' = T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .curve_core import (
    CurveSample,
    FrenetApparatus,
    gram_schmidt4,
    wcurve_derivative,
)
from .errors import (
    BadInitialFrame,
    CurvatureVanishes,
    ParamOutOfRange,
    ProfileTooCoarse,
    UnknownFamily,
)
from .quadrature import SampledFunction

COARSENESS_BOUND = 0.1


@dataclass(frozen=True)
class CurvatureProfile:
    """Sampled curvatures ``kappa1..3`` on the grid ``s0 + i*h``.

    ``family`` and ``params`` record how a builtin profile was generated.
    """

    s0: float
    h: float
    kappa1: np.ndarray
    kappa2: np.ndarray
    kappa3: np.ndarray
    family: str | None = None
    params: tuple = field(default=())

    def __post_init__(self):
        ks = [np.asarray(k, dtype=float) for k in (self.kappa1, self.kappa2, self.kappa3)]
        if ks[0].ndim != 1 or any(k.shape != ks[0].shape for k in ks):
            raise ValueError("kappa arrays must be one-dimensional with a common length")
        if not self.h > 0:
            raise ValueError(f"grid step must be positive, got {self.h}")
        object.__setattr__(self, "kappa1", ks[0])
        object.__setattr__(self, "kappa2", ks[1])
        object.__setattr__(self, "kappa3", ks[2])
        object.__setattr__(self, "params", tuple(self.params))

    @property
    def n(self) -> int:
        return self.kappa1.shape[0]

    @property
    def s(self) -> np.ndarray:
        return self.s0 + self.h * np.arange(self.n)

    @property
    def kappas(self) -> np.ndarray:
        return np.stack([self.kappa1, self.kappa2, self.kappa3], axis=1)

    def function(self, i: int) -> SampledFunction:
        """kappa_i (1-based) as a SampledFunction."""
        return SampledFunction(self.s0, self.h, self.kappas[:, i - 1])

    def validate(self, kappa_min: float | None = None) -> None:
        """Check kappa1, kappa2 > kappa_min and |kappa3| > kappa_min everywhere."""
        if kappa_min is None:
            kappa_min = 1e-8 / self.h
        for i, k in enumerate((self.kappa1, self.kappa2, np.abs(self.kappa3)), start=1):
            bad = np.flatnonzero(~(k > kappa_min))
            if bad.size:
                j = int(bad[0])
                raise CurvatureVanishes(i, j, float(k[j]), kappa_min)

    @classmethod
    def from_kappas(cls, s0, h, kappas, family=None, params=()):
        kappas = np.asarray(kappas, dtype=float)
        return cls(s0, h, kappas[:, 0], kappas[:, 1], kappas[:, 2], family, params)


@dataclass(frozen=True)
class ReconstructionResult:
    curve: CurveSample
    apparatus: FrenetApparatus
    drift: float  # max orthonormality defect of the emitted frames
    step_defect: float  # max per-step defect before re-orthonormalization


def frenet_matrix(k1: float, k2: float, k3: float) -> np.ndarray:
    return np.array([[0.0, k1, 0.0, 0.0],
                     [-k1, 0.0, k2, 0.0],
                     [0.0, -k2, 0.0, k3],
                     [0.0, 0.0, -k3, 0.0]])


def midpoint_values(k: np.ndarray) -> np.ndarray:
    """Values halfway between consecutive samples from local cubic interpolation."""
    n = k.shape[0]
    if n < 4:
        return 0.5 * (k[:-1] + k[1:])
    mid = np.empty(n - 1)
    mid[1:-1] = (-k[:-3] + 9.0 * k[1:-2] + 9.0 * k[2:-1] - k[3:]) / 16.0
    mid[0] = (5.0 * k[0] + 15.0 * k[1] - 5.0 * k[2] + k[3]) / 16.0
    mid[-1] = (5.0 * k[-1] + 15.0 * k[-2] - 5.0 * k[-3] + k[-4]) / 16.0
    return mid


def rk4_step_matrices(k_start, k_mid, k_end, h):
    """Per-interval RK4 propagators for the linear system ``E' = K(s) E``.

    Returns ``step`` (m, 4, 4) with ``E_next = step @ E`` and ``move`` (m, 4)
    with ``p_next = p + move @ E``; both are exactly the classical RK4 stages
    written out as matrices, with K evaluated at the interval start, middle
    and end.
    """
    ka, km, kb = (_frenet_matrices(k) for k in (k_start, k_mid, k_end))
    eye = np.broadcast_to(np.eye(4), ka.shape)
    s1 = eye
    s2 = eye + 0.5 * h * ka
    s3 = eye + 0.5 * h * km @ s2
    s4 = eye + h * km @ s3
    step = eye + h / 6.0 * (ka @ s1 + 2.0 * km @ s2 + 2.0 * km @ s3 + kb @ s4)
    move = h / 6.0 * (s1 + 2.0 * s2 + 2.0 * s3 + s4)[:, 0, :]
    return step, move


def _frenet_matrices(k: np.ndarray) -> np.ndarray:
    m = np.zeros((k.shape[0], 4, 4))
    m[:, 0, 1], m[:, 1, 2], m[:, 2, 3] = k[:, 0], k[:, 1], k[:, 2]
    m[:, 1, 0], m[:, 2, 1], m[:, 3, 2] = -k[:, 0], -k[:, 1], -k[:, 2]
    return m


def _orthonormalize_rows(e: np.ndarray) -> np.ndarray:
    """Gram-Schmidt with re-orthogonalization on the rows of one 4x4 frame."""
    q = np.empty((4, 4))
    for i in range(4):
        w = e[i]
        if i:
            b = q[:i]
            w = w - (b @ w) @ b
            w = w - (b @ w) @ b
        q[i] = w / np.sqrt(w @ w)
    return q


def _check_frame(frame0) -> np.ndarray:
    e0 = np.asarray(frame0, dtype=float)
    if e0.shape != (4, 4):
        raise BadInitialFrame(f"initial frame must be 4x4, got shape {e0.shape}")
    defect = np.max(np.abs(e0 @ e0.T - np.eye(4)))
    if not defect <= 1e-12:
        raise BadInitialFrame(f"initial frame is not orthonormal (defect {defect:.3e})")
    if np.linalg.det(e0) < 0:
        raise BadInitialFrame("initial frame is left-handed; det[T N B1 B2] must be +1")
    return e0


def reconstruct_curve(profile: CurvatureProfile, frame0=None, p0=None,
                      reorthonormalize: bool = True,
                      kappa_min: float | None = None) -> ReconstructionResult:
    """Integrate the Frenet system for ``profile`` with classical RK4.

    One RK4 step per grid interval; curvatures at the half steps come from
    cubic interpolation of the samples.  After each step the frame is
    projected back onto the orthogonal group by Gram-Schmidt (disable with
    ``reorthonormalize=False`` to observe the raw RK4 defect).
    """
    e = np.eye(4) if frame0 is None else _check_frame(frame0)
    p = np.zeros(4) if p0 is None else np.asarray(p0, dtype=float).copy()
    if p.shape != (4,):
        raise ValueError("p0 must be a point of R^4")
    h, n = profile.h, profile.n
    kap = profile.kappas
    if n > 1:
        coarse = h * float(np.max(np.abs(kap)))
        if coarse > COARSENESS_BOUND:
            raise ProfileTooCoarse(coarse, COARSENESS_BOUND)
    profile.validate(kappa_min)
    mids = np.stack([midpoint_values(kap[:, j]) for j in range(3)], axis=1) if n > 1 else None

    frames = np.empty((n, 4, 4))
    points = np.empty((n, 4))
    frames[0], points[0] = e, p
    step_defect = 0.0
    if n > 1:
        step, move = rk4_step_matrices(kap[:-1], mids, kap[1:], h)
        eye = np.eye(4)
        for i in range(n - 1):
            p = p + move[i] @ e
            e = step[i] @ e
            step_defect = max(step_defect, float(np.max(np.abs(e @ e.T - eye))))
            if reorthonormalize:
                e = _orthonormalize_rows(e)
            frames[i + 1], points[i + 1] = e, p

    app = FrenetApparatus(profile.s0, h, frames, kap.copy())
    curve = CurveSample(profile.s0, h, points)
    return ReconstructionResult(curve, app, app.orthonormality_defect(), step_defect)


# ---------------------------------------------------------------------------
# builtin families


def scalar_family(name: str, params, s) -> np.ndarray:
    """Scalar test functions: ``const:c`` and ``sine:m,a,w[,phase]`` (m*(1 + a sin(w s + phase)))."""
    params = [float(x) for x in params]
    s = np.asarray(s, dtype=float)
    if name == "const":
        if len(params) != 1:
            raise ParamOutOfRange("const takes one parameter")
        return np.full_like(s, params[0])
    if name == "sine":
        if len(params) not in (3, 4):
            raise ParamOutOfRange("sine takes m,a,w[,phase]")
        m, a, w = params[:3]
        phase = params[3] if len(params) == 4 else 0.0
        return m * (1.0 + a * np.sin(w * s + phase))
    raise UnknownFamily(f"unknown scalar family {name!r}")


def wcurve_curvatures(a: float, p: float, b: float, q: float) -> tuple[float, float, float]:
    """Constant curvatures of the W-curve (a cos ps, a sin ps, b cos qs, b sin qs).

    Evaluated from the exact derivatives at s = 0, with the frame oriented
    right-handed.
    """
    d = np.array([wcurve_derivative(a, p, b, q, 0.0, k) for k in (1, 2, 3, 4)])
    e, _ = gram_schmidt4(*d)
    if np.linalg.det(e) < 0:
        e[3] *= -1.0
    k1 = float(d[1] @ e[1])
    k2 = float(d[2] @ e[2]) / k1
    k3 = float(d[3] @ e[3]) / (k1 * k2)
    return k1, k2, k3


def _grid(grid):
    s0, h, n = grid
    return float(s0), float(h), int(n)


def builtin_profile(name: str, params, grid, base: CurvatureProfile | None = None,
                    ) -> CurvatureProfile:
    """Sampled curvature profile from a named family.

    ``constant``      k1, k2, k3
    ``wcurve``        a, p, b, q with a^2 p^2 + b^2 q^2 = 1
    ``perturbed``     amp[, freq]: kappa1 of ``base`` times (1 + amp sin(freq s))
    ``sine``          m1,a1,w1, m2,a2,w2, m3,a3,w3: kappa_i = m_i (1 + a_i sin(w_i s))
    ``smooth-random`` seed: a sine profile with seeded random coefficients
    """
    params = tuple(float(x) for x in params)
    s0, h, n = _grid(grid)
    s = s0 + h * np.arange(n)
    if name == "constant":
        if len(params) != 3:
            raise ParamOutOfRange("constant takes k1,k2,k3")
        k = np.tile(params, (n, 1))
    elif name == "wcurve":
        if len(params) != 4:
            raise ParamOutOfRange("wcurve takes a,p,b,q")
        a, p, b, q = params
        if min(a, b) <= 0 or min(p, q) <= 0 or p == q:
            raise ParamOutOfRange("wcurve needs a, b, p, q > 0 and p != q")
        if abs(a * a * p * p + b * b * q * q - 1.0) > 1e-9:
            raise ParamOutOfRange("wcurve needs a^2 p^2 + b^2 q^2 = 1 (unit speed)")
        k = np.tile(wcurve_curvatures(a, p, b, q), (n, 1))
    elif name == "perturbed":
        if base is None:
            raise ParamOutOfRange("perturbed needs a base profile")
        if len(params) not in (1, 2):
            raise ParamOutOfRange("perturbed takes amp[,freq]")
        amp = params[0]
        freq = params[1] if len(params) == 2 else 1.0
        if not abs(amp) < 1.0:
            raise ParamOutOfRange("perturbation amplitude must be below 1")
        if base.n != n or base.h != h or base.s0 != s0:
            raise ParamOutOfRange("base profile grid differs from the requested grid")
        k = base.kappas.copy()
        k[:, 0] *= 1.0 + amp * np.sin(freq * s)
        params = params + (("base", base.family, base.params),)
    elif name == "sine":
        if len(params) != 9:
            raise ParamOutOfRange("sine takes nine parameters")
        k = np.stack([scalar_family("sine", params[3 * i:3 * i + 3], s) for i in range(3)],
                     axis=1)
    elif name == "smooth-random":
        if len(params) != 1:
            raise ParamOutOfRange("smooth-random takes a seed")
        rng = np.random.default_rng(int(params[0]))
        coef = []
        for _ in range(3):
            coef += [rng.uniform(0.4, 1.5), rng.uniform(0.1, 0.5), rng.uniform(0.3, 2.0)]
        return replace(builtin_profile("sine", coef, grid), family=name, params=params)
    else:
        raise UnknownFamily(f"unknown profile family {name!r}")
    return CurvatureProfile.from_kappas(s0, h, k, name, params)

