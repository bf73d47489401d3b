"""Discrete Frechet coupling table (Eiter & Mannila recurrence)."""

import math

import numpy as np

from .._backend import njit


@njit
def frechet_table_numba(dist):
    m, n = dist.shape
    ret = np.empty((m, n), dtype=np.float64)
    ret[0, 0] = dist[0, 0]
    for i in range(1, m):
        ret[i, 0] = max(ret[i - 1, 0], dist[i, 0])
    for j in range(1, n):
        ret[0, j] = max(ret[0, j - 1], dist[0, j])
    for i in range(1, m):
        for j in range(1, n):
            ret[i, j] = max(min(ret[i - 1, j], ret[i, j - 1], ret[i - 1, j - 1]), dist[i, j])
    return ret


def frechet_table_numpy(dist):
    # Wavefront over anti-diagonals: cell (i, j) only needs diagonals i+j-1 and i+j-2.
    dist = np.asarray(dist, dtype=np.float64)
    m, n = dist.shape
    ret = np.full((m, n), np.inf)
    ret[0, 0] = dist[0, 0]
    for k in range(1, m + n - 1):
        i = np.arange(max(0, k - n + 1), min(k, m - 1) + 1)
        j = k - i
        up = np.where(i > 0, ret[np.maximum(i - 1, 0), j], np.inf)
        left = np.where(j > 0, ret[i, np.maximum(j - 1, 0)], np.inf)
        diag = np.where((i > 0) & (j > 0), ret[np.maximum(i - 1, 0), np.maximum(j - 1, 0)], np.inf)
        ret[i, j] = np.maximum(np.minimum(np.minimum(up, left), diag), dist[i, j])
    return ret


@njit
def frechet_value_numba(p, q):
    # Same recurrence on two rolling rows, distances computed on the fly.
    m = p.shape[0]
    n = q.shape[0]
    prev = np.empty(n, dtype=np.float64)
    cur = np.empty(n, dtype=np.float64)
    for i in range(m):
        px = p[i, 0]
        py = p[i, 1]
        for j in range(n):
            dx = px - q[j, 0]
            dy = py - q[j, 1]
            d = math.hypot(dx, dy)
            if i == 0 and j == 0:
                best = d
            elif i == 0:
                best = max(cur[j - 1], d)
            elif j == 0:
                best = max(prev[0], d)
            else:
                best = max(min(prev[j], cur[j - 1], prev[j - 1]), d)
            cur[j] = best
        prev, cur = cur, prev
    return prev[n - 1]


def frechet_value_numpy(p, q):
    dist = np.hypot(p[:, None, 0] - q[None, :, 0], p[:, None, 1] - q[None, :, 1])
    return frechet_table_numpy(dist)[-1, -1]
