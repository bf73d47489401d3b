import numpy as np
import pytest

from leafmatch import set_backend
from leafmatch.geometry import Contour, OpenCurve


def circle(r=1.0, n=500, center=(0.0, 0.0), phase=0.0):
    t = phase + np.arange(n) * (2 * np.pi / n)
    return Contour(np.column_stack([center[0] + r * np.cos(t), center[1] + r * np.sin(t)]))


def ellipse(a=2.0, b=1.0, n=600):
    t = np.arange(n) * (2 * np.pi / n)
    return Contour(np.column_stack([a * np.cos(t), b * np.sin(t)]))


def square(n_side=100, size=1.0):
    s = np.arange(n_side) / n_side * size
    z, o = np.zeros(n_side), np.full(n_side, size)
    pts = np.concatenate([
        np.column_stack([s, z]),
        np.column_stack([o, s]),
        np.column_stack([size - s, o]),
        np.column_stack([z, size - s]),
    ])
    return Contour(pts)


def rotation(deg):
    a = np.deg2rad(deg)
    return np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    prev = set_backend(request.param)
    yield request.param
    set_backend(prev)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
