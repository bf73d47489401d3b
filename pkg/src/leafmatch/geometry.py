"""Point sequences, resampling, smoothing, curvature and occlusion.

Every function accepts either a :class:`Curve` (``Contour`` / ``OpenCurve``)
or a bare ``(n, 2)`` array together with ``closed=``. A curve in gives the
same kind of curve back; an array in gives an array back.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import savgol_filter

from . import kernels

PERIMETER = 1000.0
"""Length every ingested curve is scaled to."""


class Curve:
    """An ordered, immutable sequence of 2D points."""

    closed = None
    min_points = 2

    def __init__(self, points):
        pts = np.array(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"expected an (n, 2) point array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if len(pts) < self.min_points:
            raise ValueError(f"{type(self).__name__} needs at least {self.min_points} points, got {len(pts)}")
        self._check(pts)
        pts.setflags(write=False)
        self.points = pts

    def _check(self, pts):
        pass

    @classmethod
    def _unchecked(cls, pts):
        obj = cls.__new__(cls)
        pts = np.array(pts, dtype=np.float64)
        pts.setflags(write=False)
        obj.points = pts
        return obj

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"{type(self).__name__}(n={len(self)}, length={self.length:.6g})"

    @property
    def length(self):
        return arc_positions(self.points, self.closed)[1]


class Contour(Curve):
    """Closed, counter-clockwise contour."""

    closed = True
    min_points = 8

    def _check(self, pts):
        step = np.diff(pts, axis=0, append=pts[:1])
        if np.any(np.all(step == 0.0, axis=1)):
            raise ValueError("contour has repeated consecutive points")
        if signed_area(pts) <= 0:
            raise ValueError("contour must be counter-clockwise (positive signed area)")


class OpenCurve(Curve):
    """Open curve, e.g. the visible part of an occluded contour."""

    closed = False
    min_points = 4

    def _check(self, pts):
        if np.all(pts[0] == pts[-1]):
            raise ValueError("open curve endpoints must be distinct")


@dataclass(frozen=True)
class CurvatureProfile:
    local: np.ndarray
    global_: np.ndarray


def _unpack(curve, closed):
    if isinstance(curve, Curve):
        return curve.points, curve.closed
    if closed is None:
        raise TypeError("closed= is required when passing a bare point array")
    pts = np.asarray(curve, dtype=np.float64)
    return pts, bool(closed)


def _repack(curve, pts):
    if isinstance(curve, Curve):
        return type(curve)._unchecked(pts)
    return pts


def signed_area(points):
    x, y = np.asarray(points, dtype=np.float64).T
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def arc_positions(points, closed):
    """Cumulative arc length at each vertex, and the total length.

    For closed curves the total includes the closing edge.
    """
    pts = np.asarray(points, dtype=np.float64)
    seg = np.diff(pts, axis=0)
    lens = np.sqrt((seg * seg).sum(axis=1))
    cum = np.concatenate([[0.0], np.cumsum(lens)])
    total = cum[-1]
    if closed:
        d = pts[0] - pts[-1]
        total += float(np.sqrt(d @ d))
    return cum, float(total)


def normalize(curve, closed=None, length=PERIMETER):
    """Centre on the arc-length centroid, scale to ``length``, force CCW if closed."""
    pts, closed = _unpack(curve, closed)
    if closed and signed_area(pts) < 0:
        pts = pts[::-1]
    nxt = np.roll(pts, -1, axis=0) if closed else pts[1:]
    cur = pts if closed else pts[:-1]
    w = np.sqrt(((nxt - cur) ** 2).sum(axis=1))
    total = w.sum()
    if total == 0:
        raise ValueError("degenerate curve (zero length)")
    centroid = (w[:, None] * 0.5 * (cur + nxt)).sum(axis=0) / total
    return _repack(curve, (pts - centroid) * (length / total))


def transform(curve, matrix=None, offset=(0.0, 0.0), closed=None):
    """Apply ``p -> matrix @ p + offset``; reflections flip closed curves back to CCW."""
    pts, closed = _unpack(curve, closed)
    out = pts @ (np.eye(2) if matrix is None else np.asarray(matrix, dtype=np.float64)).T + np.asarray(offset)
    if closed and isinstance(curve, Curve) and signed_area(out) < 0:
        out = out[::-1]
    return _repack(curve, out)


def resample_uniform(curve, n, closed=None):
    """Resample to ``n`` points with equal consecutive chords.

    The output points lie on the input polyline. Open curves keep both
    endpoints; closed curves start at the first input point. Because all
    chords are equal, resampling the result again at the same ``n``
    returns it unchanged.
    """
    pts, closed = _unpack(curve, closed)
    if n < 2 or (closed and n < 3):
        raise ValueError(f"n too small: {n}")
    _, total = arc_positions(pts, closed)
    if total <= 0:
        raise ValueError("degenerate curve (zero length)")
    walk = np.vstack([pts, pts[:1]]) if closed else pts
    nsteps = n if closed else n - 1
    xs = np.ascontiguousarray(walk[:, 0])
    ys = np.ascontiguousarray(walk[:, 1])
    c, done, ox, oy = kernels.equal_chord(xs, ys, nsteps, total)
    end = walk[-1]
    if done != nsteps or np.hypot(ox[-1] - end[0], oy[-1] - end[1]) > 1e-8 * c:
        # the divider walk jumps past the end on some non-convex polygons
        return _repack(curve, _relax_chords(walk, total, nsteps, closed))
    out = np.empty((n, 2))
    out[0] = pts[0]
    if closed:
        out[1:, 0] = ox[:-1]
        out[1:, 1] = oy[:-1]
    else:
        out[1:, 0] = ox
        out[1:, 1] = oy
        out[-1] = pts[-1]
    return _repack(curve, out)


def _relax_chords(walk, total, nsteps, closed, iters=500):
    """Fallback for :func:`resample_uniform`: equalize chords by fixed-point
    iteration on the arc-length positions of the samples."""
    cum = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(walk, axis=0).T))])
    u = np.linspace(0.0, total, nsteps + 1)
    target = np.linspace(0.0, 1.0, nsteps + 1)
    best, best_r = None, np.inf
    for _ in range(iters):
        p = np.column_stack([np.interp(u, cum, walk[:, 0]), np.interp(u, cum, walk[:, 1])])
        ch = np.hypot(*np.diff(p, axis=0).T)
        r = ch.std() / ch.mean()
        if r < best_r:
            best, best_r = p, r
        if r < 1e-12:
            break
        f = np.concatenate([[0.0], np.cumsum(ch)])
        u = 0.5 * (u + np.interp(target, f / f[-1], u))
    if best_r > 1e-9:
        warnings.warn(f"equal-chord resampling did not converge (spacing cv {best_r:.2e})",
                      RuntimeWarning, stacklevel=3)
    return best[:-1] if closed else best


def resample_arclength(points, n):
    """``n`` points at equal arc-length steps along an open polyline.

    Cheaper than :func:`resample_uniform` (linear interpolation instead of
    an equal-chord search) and used where a curve is resampled many times.
    """
    pts = np.asarray(points, dtype=np.float64)
    cum, total = arc_positions(pts, False)
    if total <= 0:
        raise ValueError("degenerate curve (zero length)")
    t = np.linspace(0.0, total, n)
    return np.column_stack([np.interp(t, cum, pts[:, 0]), np.interp(t, cum, pts[:, 1])])


def _savgol(pts, window, closed):
    mode = "wrap" if closed else "interp"
    return savgol_filter(pts, window, 2, axis=0, mode=mode)


def savgol_smooth(curve, window=9, closed=None):
    """Second-order Savitzky-Golay smoothing of both coordinates.

    Closed curves wrap around; open curves use a polynomial fit over the
    first/last window, so quadratic curves are reproduced exactly.
    """
    pts, closed = _unpack(curve, closed)
    if window % 2 == 0 or window < 5:
        raise ValueError(f"window must be odd and >= 5, got {window}")
    if window > len(pts) / 4:
        raise ValueError(f"window {window} too large for {len(pts)} points (max len/4)")
    return _repack(curve, _savgol(pts, window, closed))


def _tangent_series(pts, closed):
    """Unwrapped tangent angle and arc-length midpoint of every segment."""
    seg = np.diff(pts, axis=0, append=pts[:1]) if closed else np.diff(pts, axis=0)
    lens = np.sqrt((seg * seg).sum(axis=1))
    phi = np.arctan2(seg[:, 1], seg[:, 0])
    turn = np.angle(np.exp(1j * np.diff(phi)))
    unwrapped = phi[0] + np.concatenate([[0.0], np.cumsum(turn)])
    start = np.concatenate([[0.0], np.cumsum(lens)[:-1]])
    mid = start + 0.5 * lens
    total_turn = unwrapped[-1] - unwrapped[0] + float(np.angle(np.exp(1j * (phi[0] - phi[-1]))))
    return unwrapped, mid, lens.sum(), total_turn


def curvature_profile(curve, window=20, closed=None):
    """Curvature magnitude at every point.

    The unwrapped tangent angle is fitted by a least-squares quadratic in arc
    length over ``window`` segments centred on each point; the slope of the
    fit at the point is the curvature. Exact for circles and lines; open
    curves are extended by mirroring the tangent-angle series at the ends.
    """
    pts, closed = _unpack(curve, closed)
    n = len(pts)
    if window < 5:
        raise ValueError("window must be >= 5")
    phi, mid, total, turning = _tangent_series(pts, closed)
    cum, _ = arc_positions(pts, closed)
    nseg = len(phi)
    h = window // 2
    offs = np.arange(-h, window - h)
    k = np.arange(n)[:, None] + offs[None, :]
    if closed:
        laps = np.floor_divide(k, nseg)
        base = np.mod(k, nseg)
        s = mid[base] + laps * total
        y = phi[base] + laps * turning
    else:
        last = nseg - 1
        s = np.empty(k.shape)
        y = np.empty(k.shape)
        inside = (k >= 0) & (k <= last)
        s[inside] = mid[k[inside]]
        y[inside] = phi[k[inside]]
        lo = k < 0
        mlo = np.clip(-k[lo] - 1, 0, last)
        s[lo] = -mid[mlo]
        y[lo] = 2 * phi[0] - phi[mlo]
        hi = k > last
        mhi = np.clip(2 * last + 1 - k[hi], 0, last)
        s[hi] = 2 * total - mid[mhi]
        y[hi] = 2 * phi[last] - phi[mhi]
    x = s - cum[:, None]
    y = y - y[:, h:h + 1]
    scale = np.abs(x).max(axis=1)
    good = scale > 0
    scale[~good] = 1.0
    x = x / scale[:, None]
    v = np.stack([np.ones_like(x), x, x * x], axis=2)
    gram = np.einsum("nki,nkj->nij", v, v)
    rhs = np.einsum("nki,nk->ni", v, y)
    gram += 1e-12 * np.trace(gram, axis1=1, axis2=2)[:, None, None] * np.eye(3)
    coef = np.linalg.solve(gram, rhs[..., None])[..., 0]
    kappa = np.abs(coef[:, 1]) / scale
    kappa[~good] = 0.0
    return kappa


def local_curvature(curve, i, window=20, closed=None):
    return float(curvature_profile(curve, window, closed)[i])


def global_window(n):
    w = int(round(n / 3))
    return max(5, w if w % 2 else w + 1)


def global_curvature_profile(curve, closed=None):
    """Curvature over a third of the curve after matching-width smoothing."""
    pts, closed = _unpack(curve, closed)
    w = min(global_window(len(pts)), len(pts) - (1 - len(pts) % 2))
    smoothed = _savgol(pts, w, closed)
    return curvature_profile(smoothed, w, closed)


def global_curvature(curve, i, closed=None):
    return float(global_curvature_profile(curve, closed)[i])


def curvature_profiles(curve, local_window=20, closed=None):
    return CurvatureProfile(curvature_profile(curve, local_window, closed),
                            global_curvature_profile(curve, closed))


def geodesic_length(curve, i, j, closed=None):
    """Along-curve length from point ``i`` to ``j`` (counter-clockwise if closed)."""
    pts, closed = _unpack(curve, closed)
    n = len(pts)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"index out of range for {n} points: {i}, {j}")
    cum, total = arc_positions(pts, closed)
    if closed:
        return float((cum[j] - cum[i]) % total) if i != j else 0.0
    if i > j:
        raise ValueError("open curves need i <= j")
    return float(cum[j] - cum[i])


def occlude(contour, fraction, seed):
    """Cut a contiguous arc of ``fraction`` of the perimeter out of a contour.

    The cut starts at a point drawn from ``seed``; the rest of the contour,
    in its original order, is returned as an :class:`OpenCurve`. With
    ``fraction == 0`` only the closing edge is dropped.
    """
    if not 0.0 <= fraction <= 0.95:
        raise ValueError(f"occlusion fraction must lie in [0, 0.95], got {fraction}")
    pts, closed = _unpack(contour, True)
    if not closed:
        raise ValueError("occlude needs a closed contour")
    n = len(pts)
    if fraction == 0.0:
        return OpenCurve(pts)
    rng = np.random.default_rng(seed)
    start = int(rng.integers(n))
    order = np.roll(np.arange(n), -(start - 1))  # order[0] is the last kept point before the gap
    ring = pts[order]
    cum, total = arc_positions(ring, True)
    target = fraction * total
    end = int(np.argmin(np.abs(cum[1:] - target))) + 1
    end = max(end, 1)
    kept = np.concatenate([ring[end:], ring[:1]])
    if len(kept) < OpenCurve.min_points:
        raise ValueError("occlusion leaves too few points")
    return OpenCurve(kept)
