"""Slant helices in R^4: curves whose principal normal keeps a constant angle with an axis.

Notation used throughout, for curvatures k1, k2, k3 on a uniform grid and an
additive constant c0:

    J  = integral of k1 (equal to c0 at the left endpoint)
    R  = (k1 / k2) J
    F  = (R' + k2) / k3
    C  = J^2 + F^2 + R^2

The curve is a slant helix exactly when C is constant for a suitable c0,
and then C = tan^2(theta) where theta is the angle between N and the axis

    U = cos(theta) (J T + N + R B1 + F B2).

Equivalent tests: F' + k3 R = 0 (``f_function_check``), and constancy of

    m = F cos(phi) + R sin(phi) + int(k2 sin(phi))
    n = F sin(phi) - R cos(phi) - int(k2 cos(phi)),   phi = int(k3)

(``integral_characterization_check``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import CurvatureVanishes, SquareRootDomain
from .frenet_ode import CurvatureProfile
from .quadrature import (
    SampledFunction,
    antiderivative,
    derivative_values,
    fit_integration_constant,
    cumulative_simpson,
)

# samples dropped at each end of derived series: the one-sided derivative band
EXTRA_TRIM = 2
TOL_CONST = 1e-4
TOL_RES = 1e-4
TOL_AXIS = 1e-5
# theta closer than this to 0 or pi/2 is reported Indeterminate
THETA_MARGIN = 1e-6


class Verdict(str, enum.Enum):
    SLANT = "Slant"
    NOT_SLANT = "NotSlant"
    INDETERMINATE = "Indeterminate"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class AxisCoefficients:
    """Frame components a1..a4 of the axis plus the auxiliary series."""

    a1: SampledFunction
    a2: SampledFunction
    a3: SampledFunction
    a4: SampledFunction
    phi: SampledFunction
    f: SampledFunction
    m: SampledFunction
    n: SampledFunction
    A: float
    B: float
    c0: float

    def norm_squared(self) -> np.ndarray:
        return sum(a.values ** 2 for a in (self.a1, self.a2, self.a3, self.a4))


@dataclass(frozen=True)
class Constancy:
    mean: float
    std: float
    max_dev: float


@dataclass(frozen=True)
class SlantDiagnostics:
    invariant: SampledFunction
    theta: float
    axisU: np.ndarray
    constancy: Constancy
    verdict: Verdict
    c0: float
    axis_spread: float  # max over s of |U(s) - mean U|
    constant_ok: bool
    axis_ok: bool


@dataclass(frozen=True)
class FCheck:
    f: SampledFunction
    residual: SampledFunction
    passed: bool


@dataclass(frozen=True)
class IntegralCheck:
    m: SampledFunction
    n: SampledFunction
    A: float
    B: float
    residual: SampledFunction
    passed: bool


@dataclass(frozen=True)
class SynthesisRecord:
    A: float
    B: float
    D: float
    c_bar: float  # value of int k1 at the left endpoint
    C: float  # the constant the invariant takes, D + A^2 + B^2
    theta: float


def _trim(values, k=EXTRA_TRIM):
    return values[k:-k] if k else values


def _check_kappas(app, kappa_min=None):
    k = np.asarray(app.kappas)
    floor = 1e-8 / app.h if kappa_min is None else kappa_min
    for i in range(3):
        bad = np.flatnonzero(~(np.abs(k[:, i]) > floor))
        if bad.size:
            j = int(bad[0])
            raise CurvatureVanishes(i + 1, j + getattr(app, "offset", 0), float(k[j, i]), floor)
    return k[:, 0], k[:, 1], k[:, 2]


def _pieces(app, c0, kappa_min=None):
    """J, R, F on the full grid of ``app`` (anything with kappas, s0, h)."""
    k1, k2, k3 = _check_kappas(app, kappa_min)
    h = app.h
    J = cumulative_simpson(k1, h) + c0
    R = k1 / k2 * J
    F = (derivative_values(R, h) + k2) / k3
    return J, R, F


def _trimmed(app, values):
    return SampledFunction(app.s0 + EXTRA_TRIM * app.h, app.h, _trim(values))


def slant_invariant(app, c0: float, kappa_min: float | None = None) -> SampledFunction:
    """C(s) = J^2 + F^2 + R^2 with J anchored at ``c0``; constant iff slant helix."""
    J, R, F = _pieces(app, c0, kappa_min)
    return _trimmed(app, J * J + F * F + R * R)


def default_bracket(app) -> tuple[float, float]:
    length = app.h * (len(app.kappas) - 1)
    reach = length * float(np.max(np.abs(np.asarray(app.kappas)[:, 0])))
    return -reach, reach


def fit_c0(app, bracket=None, kappa_min=None) -> float:
    """The constant of int k1 that makes the invariant as flat as possible."""
    _check_kappas(app, kappa_min)
    if bracket is None:
        bracket = default_bracket(app)
    J0, R0, F0 = _pieces(app, 0.0, kappa_min)
    # J, R, F are affine in c0, so reuse the unit-offset increments
    J1, R1, F1 = _pieces(app, 1.0, kappa_min)
    dJ, dR, dF = J1 - J0, R1 - R0, F1 - F0

    def spread(c):
        C = (J0 + c * dJ) ** 2 + (R0 + c * dR) ** 2 + (F0 + c * dF) ** 2
        return float(np.std(_trim(C)))

    c0, _ = fit_integration_constant(spread, bracket)
    return c0


def _constancy(values) -> Constancy:
    mean = float(np.mean(values))
    return Constancy(mean, float(np.std(values)), float(np.max(np.abs(values - mean))))


def axis_field(app, theta: float, c0: float, kappa_min=None) -> np.ndarray:
    """Ambient coordinates of cos(theta) (J T + N + R B1 + F B2), trimmed grid."""
    J, R, F = _pieces(app, c0, kappa_min)
    coef = np.stack([J, np.ones_like(J), R, F], axis=1)
    U = np.cos(theta) * np.einsum("ni,nid->nd", coef, app.frames)
    return _trim(U)


def detect_slant(app, tol_const: float = TOL_CONST, tol_axis: float = TOL_AXIS,
                 bracket=None, c0: float | None = None,
                 kappa_min: float | None = None) -> SlantDiagnostics:
    """Decide whether the curve behind ``app`` is a slant helix.

    Fits the constant of int k1 (unless ``c0`` is given), then requires both
    a flat invariant, ``std(C) <= tol_const (1 + mean C)``, and a fixed axis,
    ``max |U(s) - mean U| <= tol_axis``.  If only one of the two holds, or
    the angle degenerates to 0 or pi/2, the verdict is Indeterminate.
    """
    if c0 is None:
        c0 = fit_c0(app, bracket, kappa_min)
    C = slant_invariant(app, c0, kappa_min)
    stats = _constancy(C.values)
    theta = float(np.arctan(np.sqrt(max(stats.mean, 0.0))))
    U = axis_field(app, theta, c0, kappa_min)
    Ubar = U.mean(axis=0)
    spread = float(np.max(np.linalg.norm(U - Ubar, axis=1)))
    axisU = Ubar / np.linalg.norm(Ubar)
    constant_ok = stats.std <= tol_const * (1.0 + stats.mean)
    axis_ok = spread <= tol_axis
    degenerate = not THETA_MARGIN < theta < np.pi / 2 - THETA_MARGIN
    if degenerate or constant_ok != axis_ok:
        verdict = Verdict.INDETERMINATE
    elif constant_ok:
        verdict = Verdict.SLANT
    else:
        verdict = Verdict.NOT_SLANT
    return SlantDiagnostics(C, theta, axisU, stats, verdict, c0, spread,
                            bool(constant_ok), bool(axis_ok))


def constancy_residual(app, c0: float, kappa_min=None) -> tuple[SampledFunction, float]:
    """Residual of (k1 k3 / k2) J + F' = 0 and the size of its larger term.

    This is the derivative of the invariant divided by 2F, so it vanishes
    identically on slant helices.
    """
    k1, k2, k3 = _check_kappas(app, kappa_min)
    J, R, F = _pieces(app, c0, kappa_min)
    dF = derivative_values(F, app.h)
    lead = k3 * R
    scale = max(float(np.max(np.abs(_trim(dF)))), float(np.max(np.abs(_trim(lead)))))
    return _trimmed(app, dF + lead), scale


def f_function_check(app, c0: float, tol_res: float = TOL_RES,
                     kappa_min: float | None = None) -> FCheck:
    """Test F' = -(k3 k1 / k2) J for F defined by k3 F = R' + k2."""
    J, R, F = _pieces(app, c0, kappa_min)
    dF = derivative_values(F, app.h)
    residual = _trimmed(app, dF + app.kappas[:, 2] * R)
    bound = tol_res * max(1.0, float(np.max(np.abs(_trim(dF)))))
    passed = float(np.max(np.abs(residual.values))) <= bound
    return FCheck(_trimmed(app, F), residual, bool(passed))


def _angle_integrals(app):
    h = app.h
    k2, k3 = app.kappas[:, 1], app.kappas[:, 2]
    phi = cumulative_simpson(k3, h)
    S = cumulative_simpson(k2 * np.sin(phi), h)
    Cc = cumulative_simpson(k2 * np.cos(phi), h)
    return phi, S, Cc


def integral_characterization_check(app, c0: float, tol_res: float = TOL_RES,
                                    kappa_min: float | None = None) -> IntegralCheck:
    """Test that m(s), n(s) are constant (A, B) and R matches the closed expression."""
    J, R, F = _pieces(app, c0, kappa_min)
    phi, S, Cc = _angle_integrals(app)
    cos, sin = np.cos(phi), np.sin(phi)
    m = _trim(F * cos + R * sin + S)
    n = _trim(F * sin - R * cos - Cc)
    A, B = float(np.mean(m)), float(np.mean(n))
    residual = R - ((A - S) * sin - (B + Cc) * cos)
    bound = tol_res * (1.0 + abs(A) + abs(B))
    passed = (np.std(m) <= bound and np.std(n) <= bound
              and np.max(np.abs(_trim(residual))) <= bound)
    return IntegralCheck(_trimmed(app, F * cos + R * sin + S),
                         _trimmed(app, F * sin - R * cos - Cc),
                         A, B, _trimmed(app, residual), bool(passed))


def coefficients(app, theta: float, c0: float, kappa_min: float | None = None
                 ) -> AxisCoefficients:
    """Frame components of the axis, a_i = <E_i, U>, for angle ``theta`` and constant c0."""
    if not 0.0 < theta < np.pi / 2:
        raise ValueError(f"theta must lie in (0, pi/2), got {theta}")
    J, R, F = _pieces(app, c0, kappa_min)
    a2 = np.cos(theta)
    ic = integral_characterization_check(app, c0, kappa_min=kappa_min)
    phi, _, _ = _angle_integrals(app)
    return AxisCoefficients(
        a1=_trimmed(app, a2 * J),
        a2=_trimmed(app, np.full_like(J, a2)),
        a3=_trimmed(app, a2 * R),
        a4=_trimmed(app, a2 * F),
        phi=_trimmed(app, phi),
        f=_trimmed(app, F),
        m=ic.m,
        n=ic.n,
        A=ic.A,
        B=ic.B,
        c0=c0,
    )


def synthesize_slant_profile(kappa2: SampledFunction, kappa3: SampledFunction,
                             A: float, B: float, D: float, D_floor: float = 1e-8,
                             ) -> tuple[CurvatureProfile, SynthesisRecord]:
    """Build k1 so that (k2, k3, k1) is the curvature profile of a slant helix.

    With phi = int k3, P = A - int(k2 sin phi), Q = B + int(k2 cos phi) and
    R = P sin(phi) - Q cos(phi), the choice I = sqrt(D + 2 int(k2 R)),
    k1 = k2 R / I makes I an antiderivative of k1 with (k1/k2) I = R, and the
    invariant equals D + A^2 + B^2 everywhere.
    """
    if kappa2.n != kappa3.n or kappa2.h != kappa3.h or kappa2.s0 != kappa3.s0:
        raise ValueError("kappa2 and kappa3 must share a grid")
    h = kappa2.h
    k2, k3 = kappa2.values, kappa3.values
    phi = cumulative_simpson(k3, h)
    P = A - cumulative_simpson(k2 * np.sin(phi), h)
    Q = B + cumulative_simpson(k2 * np.cos(phi), h)
    R = P * np.sin(phi) - Q * np.cos(phi)
    I2 = D + 2.0 * cumulative_simpson(k2 * R, h)
    low = float(np.min(I2))
    if not low >= D_floor:
        raise SquareRootDomain(low, D_floor, D - low + 2.0 * D_floor)
    I = np.sqrt(I2)
    k1 = k2 * R / I
    bad = np.flatnonzero(~(k1 > 0))
    if bad.size:
        j = int(bad[0])
        raise CurvatureVanishes(1, j, float(k1[j]), 0.0)
    C = D + A * A + B * B
    record = SynthesisRecord(float(A), float(B), float(D), float(I[0]), float(C),
                             float(np.arctan(np.sqrt(C))))
    profile = CurvatureProfile(kappa2.s0, h, k1, k2, k3, "slant", (A, B, D))
    return profile, record


def cylindrical_helix_invariant(app, kappa_min: float | None = None) -> SampledFunction:
    """(k1/k2)^2 + ((k1/k2)' / k3)^2, constant iff T keeps a fixed angle with an axis."""
    k1, k2, k3 = _check_kappas(app, kappa_min)
    g = k1 / k2
    return SampledFunction(app.s0, app.h, g * g + (derivative_values(g, app.h) / k3) ** 2)


def b2_slant_invariant(app, kappa_min: float | None = None) -> SampledFunction:
    """(k3/k2)^2 + ((k3/k2)' / k1)^2, constant iff B2 keeps a fixed angle with an axis."""
    k1, k2, k3 = _check_kappas(app, kappa_min)
    g = k3 / k2
    return SampledFunction(app.s0, app.h, g * g + (derivative_values(g, app.h) / k1) ** 2)
