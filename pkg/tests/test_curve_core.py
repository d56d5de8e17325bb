import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import W_PARAMS, random_rotation, wcurve_sample
from frenet4.curve_core import (
    BoundaryStencilWarning,
    CurveSample,
    arclength_reparam,
    derivatives,
    fd_weights,
    frenet_apparatus,
    gram_schmidt4,
    unit_speed_check,
    wcurve_points,
)
from frenet4.errors import (
    CurvatureVanishes,
    DegenerateInput,
    IndexOutOfRange,
    NotUnitSpeed,
    RankDeficient,
    StencilUnavailable,
    TooFewSamples,
)
from frenet4.frenet_ode import builtin_profile, reconstruct_curve


def wcurve_closed_form(a, p, b, q):
    """Curvatures of the W-curve written out by hand from its derivatives."""
    k1 = np.sqrt(a * a * p**4 + b * b * q**4)
    m6 = a * a * p**6 + b * b * q**6
    k2 = np.sqrt(m6 - k1**4) / k1
    k3 = np.sqrt(a * a * p**8 + b * b * q**8 - m6**2 / k1**2) / (k1 * k2)
    return k1, k2, k3


# --- stencils -----------------------------------------------------------------


def test_fd_weights_known_stencils():
    assert [float(w) for w in fd_weights(1, (-1, 0, 1))] == [-0.5, 0.0, 0.5]
    assert [float(w) * 12 for w in fd_weights(1, (-2, -1, 0, 1, 2))] == [1, -8, 0, 8, -1]
    assert [float(w) for w in fd_weights(4, (-2, -1, 0, 1, 2))] == [1, -4, 6, -4, 1]


def line_curve(h=0.1, n=21):
    p = np.array([1.0, -2.0, 0.5, 3.0])
    v = np.array([1.0, 2.0, -2.0, 4.0]) / 5.0
    s = h * np.arange(n)
    return CurveSample(0.0, h, p + s[:, None] * v), v


def test_derivatives_of_line():
    curve, v = line_curve()
    for i in (4, 10, 16):
        np.testing.assert_allclose(derivatives(curve, i, 1), v, atol=1e-10)
        np.testing.assert_allclose(derivatives(curve, i, 2), 0.0, atol=1e-10)


def test_derivatives_exact_on_cubics():
    h, n = 0.05, 41
    s = h * np.arange(n)
    pts = np.stack([s**3, 2 * s**2 - s, 1 - s**3 + s, 0 * s], axis=1)
    curve = CurveSample(0.0, h, pts)
    i = 20
    x = s[i]
    exact = {1: [3 * x**2, 4 * x - 1, -3 * x**2 + 1, 0],
             2: [6 * x, 4, -6 * x, 0],
             3: [6, 0, -6, 0],
             4: [0, 0, 0, 0]}
    for order, want in exact.items():
        np.testing.assert_allclose(derivatives(curve, i, order), want, atol=1e-10 * 10**order)


def test_fourth_derivative_of_cosine_is_second_order():
    # analytic: d^4/ds^4 (cos s, sin s) = (cos s, sin s); at s = 0 -> (1, 0)
    errs = []
    for h in (0.04, 0.02):
        s = h * np.arange(-20, 21)
        curve = CurveSample(s[0], h, np.stack([np.cos(s), np.sin(s), 0 * s, 0 * s], axis=1))
        d4 = derivatives(curve, 20, 4)
        errs.append(np.max(np.abs(d4 - [1, 0, 0, 0])))
    assert errs[1] < 1e-3
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_derivatives_boundary_behaviour():
    curve, v = line_curve()
    with pytest.raises(IndexOutOfRange):
        derivatives(curve, 21, 1)
    with pytest.raises(StencilUnavailable):
        derivatives(curve, 0, 1, one_sided=False)
    with pytest.warns(BoundaryStencilWarning):
        d = derivatives(curve, 0, 1)
    np.testing.assert_allclose(d, v, atol=1e-10)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        derivatives(curve, 2, 1)  # central still fits


# --- Gram-Schmidt -------------------------------------------------------------


def test_gram_schmidt_standard_basis():
    q, r = gram_schmidt4(*np.eye(4))
    np.testing.assert_array_equal(q, np.eye(4))
    np.testing.assert_array_equal(r, 1.0)


def test_gram_schmidt_exact_case():
    e = np.eye(4)
    q, r = gram_schmidt4(2 * e[0], e[0] + e[1], e[2], e[3])
    np.testing.assert_allclose(q, np.eye(4), atol=1e-15)
    assert r[0] == 2.0 and r[1] == 1.0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_gram_schmidt_random_orthonormal(seed):
    v = np.random.default_rng(seed).normal(size=(4, 4))
    if abs(np.linalg.det(v)) < 1e-3:
        return
    q, _ = gram_schmidt4(*v)
    np.testing.assert_allclose(q @ q.T, np.eye(4), atol=1e-12)


def test_gram_schmidt_rank_deficient():
    e = np.eye(4)
    with pytest.raises(RankDeficient) as info:
        gram_schmidt4(e[0], e[1], e[0] + 2 * e[1], e[3])
    assert info.value.index == 3


def test_gram_schmidt_nearly_dependent_keeps_orthogonality():
    e = np.eye(4)
    q, _ = gram_schmidt4(e[0], e[0] + 1e-9 * e[1], e[2] + e[0], e[3] - e[1])
    np.testing.assert_allclose(q @ q.T, np.eye(4), atol=1e-12)


# --- apparatus ----------------------------------------------------------------


def test_wcurve_apparatus_matches_closed_form():
    app = frenet_apparatus(wcurve_sample(h=1e-2))
    want = wcurve_closed_form(*W_PARAMS)
    for k, w in zip(app.kappas.T, want):
        np.testing.assert_allclose(np.abs(k), w, rtol=1e-6)
    assert app.orthonormality_defect() <= 1e-8
    np.testing.assert_allclose(np.linalg.det(app.frames), 1.0, atol=1e-6)
    assert np.all(app.kappa1 > 0) and np.all(app.kappa2 > 0)


def test_wcurve_apparatus_agrees_with_finer_sampling():
    coarse = frenet_apparatus(wcurve_sample(h=1e-2, length=3.0))
    fine = frenet_apparatus(wcurve_sample(h=1e-3, length=3.0))
    np.testing.assert_allclose(coarse.kappas.mean(axis=0), fine.kappas.mean(axis=0), rtol=1e-6)


def test_apparatus_grid_and_trim():
    curve = wcurve_sample(h=1e-2)
    app = frenet_apparatus(curve, stride=1)
    assert app.offset == 8
    assert app.n == curve.n - 16
    assert app.s0 == pytest.approx(curve.s0 + 8 * curve.h)
    np.testing.assert_allclose(app.T, np.array(
        [np.gradient(curve.points[:, k], curve.h) for k in range(4)]).T[8:-8], atol=1e-3)


def test_planar_circle_has_no_second_curvature():
    s = 1e-2 * np.arange(601)
    pts = np.stack([np.cos(s), np.sin(s), 0 * s, 0 * s], axis=1)
    with pytest.raises(CurvatureVanishes) as info:
        frenet_apparatus(CurveSample(0.0, 1e-2, pts))
    assert info.value.index == 2


def test_three_dimensional_helix_has_no_third_curvature():
    s = 1e-2 * np.arange(601) / np.sqrt(2)
    pts = np.stack([np.cos(s), np.sin(s), s, 0 * s], axis=1)
    with pytest.raises(CurvatureVanishes) as info:
        frenet_apparatus(CurveSample(0.0, 1e-2, pts))
    assert info.value.index == 3


def test_not_unit_speed_rejected():
    t = 1e-2 * np.arange(601)
    pts = 2 * np.stack([np.cos(t), np.sin(t), 0 * t, 0 * t], axis=1)
    with pytest.raises(NotUnitSpeed):
        frenet_apparatus(CurveSample(0.0, 1e-2, pts))


def test_too_few_samples():
    with pytest.raises(TooFewSamples):
        frenet_apparatus(wcurve_sample(h=1.0, length=7.0))


def test_round_trip_constant_profile():
    profile = builtin_profile("constant", [1, 1, 1], (0.0, 1e-3, 4001))
    app = frenet_apparatus(reconstruct_curve(profile).curve)
    np.testing.assert_allclose(app.kappas, 1.0, rtol=1e-4)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_rotation_equivariance(seed):
    rng = np.random.default_rng(seed)
    rot = random_rotation(rng)
    curve = wcurve_sample(h=1e-2, length=4.0)
    turned = CurveSample(curve.s0, curve.h, curve.points @ rot.T + rng.normal(size=4))
    a, b = frenet_apparatus(curve), frenet_apparatus(turned)
    np.testing.assert_allclose(b.frames, a.frames @ rot.T, atol=1e-8)
    np.testing.assert_allclose(b.kappas, a.kappas, atol=1e-8)


def test_reflection_flips_kappa3():
    curve = wcurve_sample(h=1e-2, length=3.0)
    mirrored = CurveSample(curve.s0, curve.h, curve.points * [1, 1, 1, -1])
    a, b = frenet_apparatus(curve), frenet_apparatus(mirrored)
    np.testing.assert_allclose(b.kappas[:, :2], a.kappas[:, :2], atol=1e-8)
    np.testing.assert_allclose(b.kappa3, -a.kappa3, atol=1e-8)


# --- arclength ----------------------------------------------------------------


def test_reparam_straight_segment():
    t = np.linspace(0, 1, 50) ** 2
    pts = np.outer(t, [2.0, 0, 0, 0])
    curve = arclength_reparam(pts)
    assert curve.h == pytest.approx(2.0 / 49, rel=1e-12)
    np.testing.assert_allclose(curve.points[:, 0], np.linspace(0, 2, 50), atol=1e-12)
    np.testing.assert_allclose(unit_speed_check(curve), 1.0, atol=1e-9)


def test_reparam_circle_step():
    # arclength of a radius-2 circle is 2 t, so the step doubles
    t = np.linspace(0, 1, 201)
    pts = 2 * np.stack([np.cos(t), np.sin(t), 0 * t, 0 * t], axis=1)
    curve = arclength_reparam(pts)
    assert curve.h == pytest.approx(2 * (t[1] - t[0]), abs=1e-6)
    np.testing.assert_allclose(np.linalg.norm(curve.points, axis=1), 2.0, atol=1e-9)


def test_reparam_unit_speed_input_is_unchanged():
    curve = wcurve_sample(h=2e-3, length=3.0)
    again = arclength_reparam(curve.points)
    np.testing.assert_allclose(again.points, curve.points, atol=1e-9)
    assert again.h == pytest.approx(curve.h, rel=1e-9)


def test_reparam_idempotent_and_unit_speed():
    t = np.linspace(0, 1, 3001) ** 1.5 * 3.0
    pts = wcurve_points(*W_PARAMS, t)
    once = arclength_reparam(pts)
    twice = arclength_reparam(once.points)
    np.testing.assert_allclose(twice.points, once.points, atol=1e-9)
    speed = unit_speed_check(once)[4:-4]
    assert np.max(np.abs(speed - 1.0)) <= 1e-6
    assert once.length == pytest.approx(3.0, rel=1e-6)


def test_reparam_errors():
    pts = wcurve_points(*W_PARAMS, np.linspace(0, 1, 20))
    with pytest.raises(DegenerateInput):
        arclength_reparam(np.insert(pts, 5, pts[5], axis=0))
    with pytest.raises(TooFewSamples):
        arclength_reparam(pts[:8])
