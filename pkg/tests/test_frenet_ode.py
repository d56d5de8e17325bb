import numpy as np
import pytest
from scipy.linalg import expm

from conftest import W_PARAMS, random_rotation, wcurve_sample
from frenet4.curve_core import frenet_apparatus, unit_speed_check
from frenet4.errors import (
    BadInitialFrame,
    CurvatureVanishes,
    ParamOutOfRange,
    ProfileTooCoarse,
    UnknownFamily,
)
from frenet4.frenet_ode import (
    CurvatureProfile,
    builtin_profile,
    frenet_matrix,
    midpoint_values,
    reconstruct_curve,
    scalar_family,
)


def test_constant_system_matches_matrix_exponential():
    h, steps = 1e-3, 200
    k = (2e-5, 3e-5, 4e-5)  # just above the default floor 1e-5
    profile = builtin_profile("constant", k, (0.0, h, steps + 1))
    frames = reconstruct_curve(profile).apparatus.frames
    step = expm(h * frenet_matrix(*k))
    e = np.eye(4)
    for i in range(1, steps + 1):
        e = step @ e
        assert np.max(np.abs(frames[i] - e)) <= 1e-10 * i


def test_initial_condition_contract():
    profile = builtin_profile("constant", [1, 1, 1], (0.0, 1e-3, 2))
    rec = reconstruct_curve(profile)
    np.testing.assert_array_equal(rec.curve.points[0], 0.0)
    np.testing.assert_array_equal(rec.apparatus.T[0], [1, 0, 0, 0])
    assert rec.curve.n == 2


def test_round_trip_equal_curvatures():
    profile = builtin_profile("constant", [1, 1, 1], (0.0, 1e-3, 3001))
    app = frenet_apparatus(reconstruct_curve(profile).curve)
    np.testing.assert_allclose(app.kappas, 1.0, rtol=1e-4)


def test_round_trip_smooth_profile():
    profile = builtin_profile("sine", [1, .3, 1.1, .8, .2, .7, .5, .3, 1.3], (0.0, 1e-3, 5001))
    rec = reconstruct_curve(profile)
    app = frenet_apparatus(rec.curve)
    sl = slice(app.offset, app.offset + app.n)
    np.testing.assert_allclose(app.kappas, profile.kappas[sl], rtol=1e-4)


def test_unit_speed_and_drift():
    profile = builtin_profile("smooth-random", [3], (0.0, 1e-3, 10001))
    rec = reconstruct_curve(profile)
    speed = unit_speed_check(rec.curve)[2:-2]
    assert np.max(np.abs(speed - 1.0)) <= 1e-7
    assert rec.drift <= 1e-9


def test_rk4_defect_order_without_projection():
    defects = []
    for h in (0.1, 0.05):
        profile = builtin_profile("constant", [1, 1, 1], (0.0, h, 2))
        defects.append(reconstruct_curve(profile, reorthonormalize=False).step_defect)
    assert defects[0] / defects[1] >= 2**4 * 0.9


def test_isometry_covariance(rng):
    profile = builtin_profile("sine", [1, .3, 1.1, .8, .2, .7, .5, .3, 1.3], (0.0, 1e-3, 3001))
    rot = random_rotation(rng)
    p0 = rng.normal(size=4)
    base = reconstruct_curve(profile)
    moved = reconstruct_curve(profile, frame0=np.eye(4) @ rot.T, p0=p0)
    np.testing.assert_allclose(moved.curve.points, base.curve.points @ rot.T + p0, atol=1e-10)
    a, b = frenet_apparatus(base.curve), frenet_apparatus(moved.curve)
    np.testing.assert_allclose(b.kappas, a.kappas, atol=1e-8)


def test_bad_initial_frames():
    profile = builtin_profile("constant", [1, 1, 1], (0.0, 1e-2, 11))
    with pytest.raises(BadInitialFrame):
        reconstruct_curve(profile, frame0=2 * np.eye(4))
    with pytest.raises(BadInitialFrame):
        reconstruct_curve(profile, frame0=np.diag([1.0, 1, 1, -1]))
    with pytest.raises(BadInitialFrame):
        reconstruct_curve(profile, frame0=np.eye(3))


def test_profile_too_coarse():
    profile = builtin_profile("constant", [20, 1, 1], (0.0, 1e-2, 11))
    with pytest.raises(ProfileTooCoarse) as info:
        reconstruct_curve(profile)
    assert info.value.product == pytest.approx(0.2)


def test_vanishing_curvature_rejected():
    profile = builtin_profile("constant", [1, 1, 0], (0.0, 1e-2, 11))
    with pytest.raises(CurvatureVanishes) as info:
        reconstruct_curve(profile)
    assert info.value.index == 3


def test_midpoint_values_exact_for_cubics():
    s = 0.1 * np.arange(12)
    f = lambda x: x**3 - 2 * x**2 + 0.5  # noqa: E731
    np.testing.assert_allclose(midpoint_values(f(s)), f(s[:-1] + 0.05), atol=1e-13)


# --- builtin families ---------------------------------------------------------


def test_builtin_constant():
    p = builtin_profile("constant", [1, 1, 1], (0.0, 0.1, 20))
    np.testing.assert_array_equal(p.kappas, 1.0)
    assert p.family == "constant"


def test_builtin_perturbed_scales_kappa1():
    base = builtin_profile("sine", [1, .3, 1.1, .8, .2, .7, .5, .3, 1.3], (0.0, 0.01, 300))
    p = builtin_profile("perturbed", [0.2], (0.0, 0.01, 300), base=base)
    np.testing.assert_allclose(p.kappa1, base.kappa1 * (1 + 0.2 * np.sin(base.s)), rtol=1e-15)
    np.testing.assert_array_equal(p.kappa2, base.kappa2)
    np.testing.assert_array_equal(p.kappa3, base.kappa3)


def test_builtin_wcurve_matches_apparatus_of_analytic_curve():
    p = builtin_profile("wcurve", W_PARAMS, (0.0, 0.01, 10))
    app = frenet_apparatus(wcurve_sample(h=1e-2))
    np.testing.assert_allclose(app.kappas, np.tile(p.kappas[0], (app.n, 1)), rtol=1e-6)
    np.testing.assert_allclose(p.kappas[0], [1.8439088914585775, 0.6507913734559685,
                                             1.0846522890932806], rtol=1e-12)


def test_builtin_errors():
    grid = (0.0, 0.1, 10)
    with pytest.raises(UnknownFamily):
        builtin_profile("spiral", [1], grid)
    with pytest.raises(ParamOutOfRange):
        builtin_profile("wcurve", [1, 1, 1, 2], grid)
    with pytest.raises(ParamOutOfRange):
        builtin_profile("constant", [1, 1], grid)
    with pytest.raises(ParamOutOfRange):
        builtin_profile("perturbed", [0.2], grid)
    base = builtin_profile("constant", [1, 1, 1], grid)
    with pytest.raises(ParamOutOfRange):
        builtin_profile("perturbed", [1.5], grid, base=base)
    with pytest.raises(UnknownFamily):
        scalar_family("cosh", [1], np.zeros(3))


def test_smooth_random_is_seeded():
    a = builtin_profile("smooth-random", [7], (0.0, 0.01, 50))
    b = builtin_profile("smooth-random", [7], (0.0, 0.01, 50))
    c = builtin_profile("smooth-random", [8], (0.0, 0.01, 50))
    np.testing.assert_array_equal(a.kappas, b.kappas)
    assert not np.allclose(a.kappas, c.kappas)
    assert np.all(a.kappas > 0)


def test_profile_validation():
    p = CurvatureProfile(0.0, 0.1, [1, 1], [1, -1], [1, 1])
    with pytest.raises(CurvatureVanishes) as info:
        p.validate()
    assert (info.value.index, info.value.sample) == (2, 1)
