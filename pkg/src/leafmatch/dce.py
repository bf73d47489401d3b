"""Discrete contour evolution and the feature graphs built on its vertices."""

import math

import numpy as np

from . import kernels
from .geometry import _unpack, arc_positions


def dce_relevance(prev, v, nxt, total_length=1.0):
    """Relevance of vertex ``v``: turn angle * l1 * l2 / (l1 + l2).

    ``l1``, ``l2`` are the lengths of the two incident edges divided by
    ``total_length``; the turn angle is the absolute change of direction at
    ``v`` in radians. Zero for collinear (straight-through) vertices.
    """
    (ax, ay), (bx, by), (cx, cy) = prev, v, nxt
    ux, uy = bx - ax, by - ay
    wx, wy = cx - bx, cy - by
    l1 = math.hypot(ux, uy)
    l2 = math.hypot(wx, wy)
    if l1 + l2 == 0:
        return 0.0
    turn = math.atan2(abs(ux * wy - uy * wx), ux * wx + uy * wy)
    return turn * (l1 / total_length) * (l2 / total_length) / ((l1 + l2) / total_length)


class FeatureGraph:
    """DCE vertices of a curve with their pairwise along-curve distances.

    Parameters
    ----------
    indices : array of int
        Positions of the nodes in the source curve, increasing.
    points : (k, 2) array
        Node coordinates.
    arc : (k,) array, optional
        Arc-length position of each node along the source curve. Graphs built
        from a curve carry it; hand-made graphs may give ``geodesic`` instead.
    length : float
        Total length of the source curve (perimeter if closed).
    closed : bool
    geodesic : (k, k) array, optional
        Explicit symmetric distance matrix, used when ``arc`` is absent.
    """

    def __init__(self, indices, points, length, closed, arc=None, geodesic=None, source=None):
        self.indices = np.asarray(indices, dtype=np.int64)
        self.points = np.asarray(points, dtype=np.float64)
        self.length = float(length)
        self.closed = bool(closed)
        self.arc = None if arc is None else np.asarray(arc, dtype=np.float64)
        self.source = source
        if self.arc is None and geodesic is None:
            raise ValueError("need either arc positions or a geodesic matrix")
        if self.arc is None:
            g = np.asarray(geodesic, dtype=np.float64)
            if g.shape != (len(self.points),) * 2:
                raise ValueError("geodesic matrix shape does not match node count")
            self._geodesic = g
        else:
            diff = np.abs(self.arc[None, :] - self.arc[:, None])
            if self.closed:
                diff = np.minimum(diff, self.length - diff)
            self._geodesic = diff

    def __len__(self):
        return len(self.points)

    @property
    def geodesic(self):
        """Symmetric matrix of shortest along-curve distances between nodes."""
        return self._geodesic

    def forward(self):
        """Distance from node i to a later node j, stored at [i, j] (i < j)."""
        if self.arc is None:
            return self._geodesic
        return np.abs(self.arc[None, :] - self.arc[:, None])

    def oriented(self, orientation):
        """Distance matrix seen by a traversal in ``orientation`` (+1 CCW, -1 CW).

        Entry [a, b] is the length walked from node ``a`` to node ``b``. Only
        closed graphs with arc positions depend on the orientation.
        """
        if self.arc is None or not self.closed:
            return self._geodesic if self.arc is None else self.forward()
        ccw = np.mod(self.arc[None, :] - self.arc[:, None], self.length)
        return ccw if orientation == 1 else ccw.T


def extract_features(curve, k=20, closed=None):
    """Reduce ``curve`` by DCE to ``k`` vertices and build their feature graph.

    Open-curve endpoints are never removed. Ties in relevance go to the lowest
    curve index.
    """
    pts, closed = _unpack(curve, closed)
    n = len(pts)
    if k > n:
        raise ValueError(f"cannot keep {k} vertices of a {n}-point curve")
    if k < (3 if closed else 2):
        raise ValueError("k too small")
    cum, total = arc_positions(pts, closed)
    if total <= 0:
        raise ValueError("degenerate curve")
    keep = kernels.dce_keep(np.ascontiguousarray(pts), closed, k, total)
    return FeatureGraph(keep, pts[keep], total, closed, arc=cum[keep], source=curve)
