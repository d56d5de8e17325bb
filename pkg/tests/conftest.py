import numpy as np
import pytest

from frenet4.curve_core import CurveSample, wcurve_points

ACCEPTANCE_LINES = []

W_PARAMS = (1 / np.sqrt(5), 1.0, 1 / np.sqrt(5), 2.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_rotation(rng, dim=4):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return q


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def wcurve_sample(h=1e-2, length=6.0, params=W_PARAMS, s0=0.0):
    n = int(round(length / h)) + 1
    s = s0 + h * np.arange(n)
    return CurveSample(s0, h, wcurve_points(*params, s))
