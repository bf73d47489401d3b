"""Affine recovery between matched curves, overlay, and discrete Frechet distance."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import Curve, _repack, resample_arclength


@dataclass(frozen=True)
class AffineTransform:
    """``p -> A @ p + t_vec``."""

    A: np.ndarray
    t_vec: np.ndarray
    rms: float = 0.0

    @classmethod
    def identity(cls):
        return cls(np.eye(2), np.zeros(2))

    def apply(self, pts):
        return np.asarray(pts, dtype=np.float64) @ self.A.T + self.t_vec

    def inverse(self):
        det = float(np.linalg.det(self.A))
        if not np.isfinite(det) or abs(det) < 1e-12 * max(1.0, float(np.abs(self.A).max()) ** 2):
            raise ValueError("affine transform is singular")
        inv = np.linalg.inv(self.A)
        return AffineTransform(inv, -inv @ self.t_vec, self.rms)


@dataclass(frozen=True)
class FrechetResult:
    distance: float
    table_dims: tuple


def _points(c):
    return c.points if isinstance(c, Curve) else np.asarray(c, dtype=np.float64)


def fit_affine(src, dst):
    """Least-squares affine map taking ``src`` points onto ``dst`` points.

    Solves min sum ||dst_i - A src_i - t||^2 in closed form. Both point sets
    are centred first, which decouples ``t`` and keeps the 2x2 normal
    equations well conditioned.
    """
    p = _points(src)
    q = _points(dst)
    if p.shape != q.shape or p.ndim != 2 or p.shape[1] != 2:
        raise ValueError("src and dst must be (n, 2) arrays of equal length")
    if len(p) < 3:
        raise ValueError("need at least 3 correspondences")
    pm, qm = p.mean(axis=0), q.mean(axis=0)
    pc, qc = p - pm, q - qm
    gram = pc.T @ pc
    # singular values of pc from the 2x2 Gram matrix
    sv = np.sqrt(np.maximum(np.linalg.eigvalsh(gram)[::-1], 0.0))
    if sv[-1] <= 1e-10 * max(sv[0], 1e-300):
        raise ValueError("correspondences are collinear or degenerate")
    A = np.linalg.solve(gram, pc.T @ qc).T
    t = qm - A @ pm
    res = q - (p @ A.T + t)
    rms = float(np.sqrt((res * res).sum(axis=1).mean()))
    return AffineTransform(A, t, rms)


def overlay(curve, xf, invert=False):
    """Apply ``xf`` (or its inverse) to every point of ``curve``."""
    if isinstance(curve, Curve):
        pts = curve.points
    else:
        pts = np.asarray(curve, dtype=np.float64)
    t = xf.inverse() if invert else xf
    return _repack(curve, t.apply(pts))


def frechet_distance(P, Q):
    """Discrete Frechet distance between two point sequences."""
    p = _points(P)
    q = _points(Q)
    if len(p) == 0 or len(q) == 0:
        raise ValueError("frechet_distance needs non-empty sequences")
    d = kernels.frechet_value(np.ascontiguousarray(p), np.ascontiguousarray(q))
    return FrechetResult(float(d), (len(p), len(q)))


def frechet_table(P, Q):
    """Full coupling table; entry ``(i, j)`` is the distance of the prefixes."""
    p = _points(P)
    q = _points(Q)
    dist = np.hypot(p[:, None, 0] - q[None, :, 0], p[:, None, 1] - q[None, :, 1])
    return kernels.frechet_table(np.ascontiguousarray(dist))


def section_score(section_pts, query_pts):
    """Frechet distance after fitting the section onto the query.

    ``query_pts`` is the query already resampled to the comparison
    resolution; the section is resampled by arc length to the same count,
    mapped into the query frame by :func:`fit_affine` and compared there, so
    scores of different database curves share the query's units.
    """
    ss = resample_arclength(section_pts, len(query_pts))
    xf = fit_affine(ss, query_pts)
    return frechet_distance(xf.apply(ss), query_pts).distance, xf


def _arc_ids(n, start, length, step):
    return np.mod(start + step * np.arange(length + 1), n)


def refine_section(contour_pts, ids, query_pts, steps=(64, 32, 16, 8, 4, 2), min_len=10):
    """Shift the ends of a contour section to minimize :func:`section_score`.

    ``ids`` are consecutive indices into the closed ``contour_pts`` (in
    either direction). Each end is moved by the given step sizes, coarse to
    fine, by coordinate descent; the traversal direction is kept.

    Returns ``(score, transform, ids)`` of the best section found.
    """
    pts = np.asarray(contour_pts, dtype=np.float64)
    n = len(pts)
    ids = np.asarray(ids, dtype=np.int64)
    step = 1 if (ids[1] - ids[0]) % n == 1 else -1
    start, length = int(ids[0]), len(ids) - 1

    def score(st, ln):
        return section_score(pts[_arc_ids(n, st, ln, step)], query_pts)

    best, xf = score(start, length)
    for h in steps:
        improved = True
        while improved:
            improved = False
            # move the start, the end, or both ends together
            for ds, dl in ((h, -h), (-h, h), (0, h), (0, -h), (h, 0), (-h, 0)):
                ln = length + dl
                if ln < min_len or ln >= n:
                    continue
                f, t = score(start + step * ds, ln)
                if f < best:
                    best, xf = f, t
                    start, length, improved = start + step * ds, ln, True
    return best, xf, _arc_ids(n, start, length, step)


@dataclass
class CandidateMatch:
    """One database section proposed for a query.

    ``order`` is the record's position in the database, used as the last
    tie-breaker so rankings are deterministic.
    """

    record_id: str
    section: object
    mapping: object
    affine: AffineTransform
    frechet: float
    energy: float = None
    order: int = 0
    species: str = ""

    def __post_init__(self):
        if not self.frechet >= 0:
            raise ValueError("frechet must be >= 0")
        if self.energy is not None and not self.energy >= 0:
            raise ValueError("energy must be >= 0")


def _frechet_key(c):
    return (c.frechet, c.mapping.cost if c.mapping is not None else 0.0, c.order)


def prune_candidates(candidates, eta=5):
    """Best ``eta`` candidates by Frechet (ties: mapping cost, then database order)."""
    if eta < 0:
        raise ValueError("eta must be >= 0")
    return sorted(candidates, key=_frechet_key)[:eta]
