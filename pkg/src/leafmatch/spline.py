"""Beta-splines with tension (skew fixed at 1) and equal-spacing sampling."""

from dataclasses import dataclass, field

import numpy as np

from .geometry import Contour, Curve, OpenCurve, resample_uniform

SKEW = 1.0


@dataclass(frozen=True)
class SplineConfig:
    tension: float = 10.0
    samples: int = 1000
    skew: float = field(default=SKEW, init=False)

    def __post_init__(self):
        if self.tension < 0:
            raise ValueError("tension must be >= 0")
        if self.samples < 4:
            raise ValueError("samples must be >= 4")


@dataclass(frozen=True)
class SplineCurve:
    control_points: np.ndarray
    config: SplineConfig = SplineConfig()
    closed: bool = True

    def __post_init__(self):
        pts = np.array(self.control_points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 4:
            raise ValueError("a spline needs at least 4 two-dimensional control points")
        pts.setflags(write=False)
        object.__setattr__(self, "control_points", pts)

    @classmethod
    def from_curve(cls, curve, config=SplineConfig()):
        return cls(curve.points, config, curve.closed)


def beta_blend(tau, tension=10.0, skew=SKEW):
    """Beta-spline blending function; zero outside (-2, 2).

    Accepts scalars or arrays. With ``tension=0, skew=1`` this is the
    uniform cubic B-spline basis.
    """
    t, s = float(tension), float(skew)
    tau = np.asarray(tau, dtype=np.float64)
    delta = t + 2 * s**3 + 4 * s**2 + 4 * s + 2
    c0 = t + 4 * s + 4 * s**2
    out = np.zeros_like(tau)
    m1 = (tau >= -2) & (tau < -1)
    m2 = (tau >= -1) & (tau < 0)
    m3 = (tau >= 0) & (tau < 1)
    m4 = (tau >= 1) & (tau <= 2)
    x = tau[m1]
    out[m1] = 2.0 / delta * (2 + x) ** 3
    x = tau[m2]
    out[m2] = (c0 - 6 * (1 - s**2) * x - 3 * x**2 * (2 + t + 2 * s)
               - 2 * x**3 * (1 + t + s + s**2)) / delta
    x = tau[m3]
    out[m3] = (c0 - 6 * x * (s - s**3) - 3 * x**2 * (t + 2 * s**2 + 2 * s**3)
               + 2 * x**3 * (t + s + s**2 + s**3)) / delta
    x = tau[m4]
    out[m4] = 2.0 / delta * s**3 * (2 - x) ** 3
    return out if out.ndim else float(out)


def _control(curve, idx):
    pts = curve.control_points
    m = len(pts)
    if curve.closed:
        return pts[np.mod(idx, m)]
    # mirror phantoms past either end so the curve passes through its end points
    lo = idx < 0
    hi = idx > m - 1
    out = pts[np.clip(idx, 0, m - 1)].copy()
    out[lo] = 2 * pts[0] - pts[np.clip(-idx[lo], 0, m - 1)]
    out[hi] = 2 * pts[-1] - pts[np.clip(2 * (m - 1) - idx[hi], 0, m - 1)]
    return out


def eval_spline(curve, u):
    """Evaluate the spline at parameter(s) ``u`` in [0, 1]."""
    u = np.asarray(u, dtype=np.float64)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    if np.any((u < 0) | (u > 1)):
        raise ValueError("u must lie in [0, 1]")
    m = len(curve.control_points)
    n = m if curve.closed else m - 1
    nu = n * u
    first = np.floor(nu - 2).astype(np.int64)
    last = np.ceil(nu + 2).astype(np.int64)
    out = np.zeros((len(u), 2))
    for off in range(int((last - first).max()) + 1):
        i = first + off
        valid = i <= last
        w = np.where(valid, beta_blend(nu - i, curve.config.tension, curve.config.skew), 0.0)
        out += w[:, None] * _control(curve, i)
    return out[0] if scalar else out


def sample_spline(curve, n=None, oversample=8):
    """``n`` points on the spline with equal spacing.

    The spline is evaluated densely (``oversample * max(n, control count)``
    parameter values), then resampled by equal chords.
    """
    n = curve.config.samples if n is None else n
    if n < 4:
        raise ValueError("n must be >= 4")
    dense = oversample * max(n, len(curve.control_points))
    if curve.closed:
        u = np.arange(dense) / dense
    else:
        u = np.linspace(0.0, 1.0, dense + 1)
    pts = eval_spline(curve, u)
    return resample_uniform(pts, n, closed=curve.closed)


def spline_resample(curve, n, tension=10.0):
    """Fit a beta-spline with ``curve`` as control polygon and sample ``n`` points."""
    spl = SplineCurve(curve.points, SplineConfig(tension=tension, samples=n), curve.closed)
    pts = sample_spline(spl, n)
    kind = Contour if curve.closed else OpenCurve
    return kind._unchecked(pts) if isinstance(curve, Curve) else pts
