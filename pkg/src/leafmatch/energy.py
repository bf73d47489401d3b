"""Per-curve adjacency matrices and the quadratic matching energy built on them."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import Curve, _unpack, arc_positions, curvature_profile, global_curvature_profile


@dataclass(frozen=True)
class EnergyWeights:
    w_local: float = 0.25
    w_global: float = 0.25
    w_angular: float = 0.25
    w_stringcut: float = 0.25

    def __post_init__(self):
        w = self.as_array()
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and >= 0")
        if w.sum() <= 0:
            raise ValueError("weights must not all be zero")

    def as_array(self):
        return np.array([self.w_local, self.w_global, self.w_angular, self.w_stringcut], dtype=np.float64)


@dataclass(frozen=True)
class BundleConfig:
    """Descriptor resolution used when building adjacency matrices.

    ``local_window=None`` scales the curvature window with the point count
    (20 points per 1000).
    """

    n_r: int = 5
    n_theta: int = 12
    stringcut_window: int = 21
    local_window: int = None
    r_inner: float = 0.125
    r_outer: float = 2.0
    eps_on: float = 1e-6

    def window_for(self, n):
        if self.local_window is not None:
            return self.local_window
        return max(5, int(round(20 * n / 1000)))


@dataclass(frozen=True)
class ShapeContextHistogram:
    bins: np.ndarray
    n_r: int
    n_theta: int

    @property
    def total(self):
        return float(self.bins.sum())


@dataclass(frozen=True)
class StringCutFeatures:
    f_below: float
    f_upper: float
    f_on_line: int
    f_bending: float

    def as_array(self):
        return np.array([self.f_below, self.f_upper, self.f_on_line, self.f_bending], dtype=np.float64)


@dataclass(frozen=True)
class AdjacencyBundle:
    a_local: np.ndarray
    a_global: np.ndarray
    a_angular: np.ndarray
    a_stringcut: np.ndarray

    @property
    def matrices(self):
        return (self.a_local, self.a_global, self.a_angular, self.a_stringcut)

    @property
    def size(self):
        return self.a_local.shape[0]

    def permuted(self, perm):
        """Bundle relabelled so that new node ``i`` is old node ``perm[i]``."""
        p = np.asarray(perm)
        return AdjacencyBundle(*(m[np.ix_(p, p)] for m in self.matrices))


def _tangents(pts, closed):
    if len(pts) == 2:
        d = pts[1] - pts[0]
        return np.vstack([d, d])
    if closed:
        return np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)
    t = np.empty_like(pts)
    t[1:-1] = pts[2:] - pts[:-2]
    t[0] = pts[1] - pts[0]
    t[-1] = pts[-1] - pts[-2]
    return t


def shape_contexts(curve, n_r=5, n_theta=12, closed=None, r_inner=0.125, r_outer=2.0):
    """Log-polar histograms of every point, shape (n, n_r * n_theta).

    Radii are divided by the mean pairwise distance and binned between
    ``r_inner`` and ``r_outer`` on a log scale, with points outside the range
    clamped into the first/last ring so every histogram counts all n-1 other
    points. Angles are measured from the local tangent; the angular bins are
    centred on the tangent direction so that points lying along a straight
    stretch do not straddle a bin edge.
    """
    pts, closed = _unpack(curve, closed)
    n = len(pts)
    if n < 2:
        raise ValueError("shape context needs at least 2 points")
    diff = pts[None, :, :] - pts[:, None, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    mean = dist.sum() / (n * (n - 1))
    if mean <= 0:
        raise ValueError("degenerate curve")
    edges = np.logspace(np.log10(r_inner), np.log10(r_outer), n_r + 1)
    rbin = np.clip(np.searchsorted(edges, dist / mean, side="right") - 1, 0, n_r - 1)
    tan = _tangents(pts, closed)
    base = np.arctan2(tan[:, 1], tan[:, 0])
    theta = np.arctan2(diff[..., 1], diff[..., 0]) - base[:, None]
    width = 2 * np.pi / n_theta
    tbin = np.floor(np.mod(theta + 0.5 * width, 2 * np.pi) / width).astype(np.int64) % n_theta
    cell = rbin * n_theta + tbin
    hist = np.zeros((n, n_r * n_theta))
    rows = np.repeat(np.arange(n), n)
    off = ~np.eye(n, dtype=bool).ravel()
    np.add.at(hist, (rows[off], cell.ravel()[off]), 1.0)
    return hist


def shape_context(curve, i, n_r=5, n_theta=12, closed=None):
    """Log-polar histogram of the points of ``curve`` seen from point ``i``."""
    h = shape_contexts(curve, n_r, n_theta, closed)[i]
    return ShapeContextHistogram(h, n_r, n_theta)


def chi2_cost(h, g):
    """Chi-squared histogram distance; bins empty in both are skipped."""
    h = np.asarray(getattr(h, "bins", h), dtype=np.float64).ravel()
    g = np.asarray(getattr(g, "bins", g), dtype=np.float64).ravel()
    if h.shape != g.shape:
        raise ValueError(f"histogram sizes differ: {h.size} vs {g.size}")
    s = h + g
    nz = s > 0
    return float(0.5 * np.sum((h[nz] - g[nz]) ** 2 / s[nz]))


def _windows(pts, closed, window):
    # (n, window) point indices around each point; open ends by odd reflection
    n = len(pts)
    h = window // 2
    k = np.arange(n)[:, None] + np.arange(-h, window - h)[None, :]
    if closed:
        return pts[np.mod(k, n)]
    out = np.empty(k.shape + (2,))
    inside = (k >= 0) & (k < n)
    out[inside] = pts[k[inside]]
    lo = k < 0
    out[lo] = 2 * pts[0] - pts[np.clip(-k[lo], 0, n - 1)]
    hi = k >= n
    out[hi] = 2 * pts[-1] - pts[np.clip(2 * (n - 1) - k[hi], 0, n - 1)]
    return out


def stringcut_features(curve, window=21, closed=None, eps_on=None):
    """StringCut features of every point, shape (n, 4).

    Columns are (below, upper, on_line, bending). A chord is drawn through the
    first and last point of the ``window``-point neighbourhood; points within
    ``eps_on`` of it (default 1e-6 of the curve length) count as on the line.
    The two side means are ordered so that ``below >= upper``; an empty side
    contributes 0.
    """
    pts, closed = _unpack(curve, closed)
    if window < 4:
        raise ValueError("window must be >= 4")
    if eps_on is None:
        eps_on = 1e-6 * arc_positions(pts, closed)[1]
    w = _windows(pts, closed, window)
    a, b = w[:, 0], w[:, -1]
    chord = b - a
    d = np.sqrt((chord * chord).sum(axis=1))
    if np.any(d == 0):
        raise ValueError("coincident window endpoints")
    rel = w - a[:, None, :]
    h = (chord[:, None, 0] * rel[..., 1] - chord[:, None, 1] * rel[..., 0]) / d[:, None]
    on = np.abs(h) <= eps_on
    above = (h > 0) & ~on
    below = (h < 0) & ~on
    na, nb = above.sum(axis=1), below.sum(axis=1)
    ma = np.where(na > 0, np.where(above, h, 0.0).sum(axis=1) / np.maximum(na, 1), 0.0)
    mb = np.where(nb > 0, -np.where(below, h, 0.0).sum(axis=1) / np.maximum(nb, 1), 0.0)
    seg = np.diff(w, axis=1)
    L = np.sqrt((seg * seg).sum(axis=2)).sum(axis=1)
    return np.stack([np.maximum(ma, mb), np.minimum(ma, mb), on.sum(axis=1).astype(np.float64), L / d], axis=1)


def stringcut(curve, i, window=21, closed=None, eps_on=None):
    """StringCut features of the ``window``-point neighbourhood centred on point ``i``."""
    f = stringcut_features(curve, window, closed, eps_on)[i]
    return StringCutFeatures(float(f[0]), float(f[1]), int(f[2]), float(f[3]))


def _absdiff(v):
    return np.abs(v[:, None] - v[None, :])


def build_bundle(curve, weights=None, cfg=BundleConfig(), closed=None):
    """The four adjacency matrices of a curve already resampled to energy resolution.

    ``weights`` is accepted for interface symmetry; matrices do not depend on it.
    """
    pts, closed = _unpack(curve, closed)
    n = len(pts)
    kl = curvature_profile(pts, cfg.window_for(n), closed)
    kg = global_curvature_profile(pts, closed)
    sc = shape_contexts(pts, cfg.n_r, cfg.n_theta, closed, cfg.r_inner, cfg.r_outer)
    ang = kernels.chi2_matrix(np.ascontiguousarray(sc))
    eps = cfg.eps_on * arc_positions(pts, closed)[1]
    f = stringcut_features(pts, min(cfg.stringcut_window, n), closed, eps)
    sd = f.std(axis=0)
    f = f / np.where(sd > 0, sd, 1.0)
    strc = np.abs(f[:, None, :] - f[None, :, :]).sum(axis=2)
    mats = [_absdiff(kl), _absdiff(kg), ang, strc]
    for m in mats:
        np.fill_diagonal(m, 0.0)
    return AdjacencyBundle(*mats)


def _check_dims(bp, bq, X):
    X = np.asarray(X, dtype=np.float64)
    m, n = bp.size, bq.size
    if X.shape != (m, n):
        raise ValueError(f"X has shape {X.shape}, expected {(m, n)}")
    return X


def matching_energy(bundle_p, bundle_q, X, weights=EnergyWeights()):
    """sum_k w_k ||A_k - X B_k X^T||_F^2 with A from ``bundle_p`` and B from ``bundle_q``."""
    X = _check_dims(bundle_p, bundle_q, X)
    total = 0.0
    for w, A, B in zip(weights.as_array(), bundle_p.matrices, bundle_q.matrices):
        if w == 0:
            continue
        r = A - X @ B @ X.T
        total += w * float(np.sum(r * r))
    return total
