"""Discrete contour evolution: greedy deletion of the least relevant vertex."""

import math

import numpy as np

from .._backend import njit

# relevances this close count as tied; ties go to the lowest index, which keeps
# the result independent of rounding noise on symmetric shapes
TIE_RTOL = 1e-9
TIE_ATOL = 1e-15


@njit
def _relevance_nb(ax, ay, bx, by, cx, cy, total):
    ux = bx - ax
    uy = by - ay
    vx = cx - bx
    vy = cy - by
    l1 = math.sqrt(ux * ux + uy * uy)
    l2 = math.sqrt(vx * vx + vy * vy)
    if l1 + l2 == 0.0:
        return 0.0
    turn = math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy)
    return turn * l1 * l2 / ((l1 + l2) * total)


def _relevance_py(ax, ay, bx, by, cx, cy, total):
    ux = bx - ax
    uy = by - ay
    vx = cx - bx
    vy = cy - by
    l1 = math.sqrt(ux * ux + uy * uy)
    l2 = math.sqrt(vx * vx + vy * vy)
    if l1 + l2 == 0.0:
        return 0.0
    turn = math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy)
    return turn * l1 * l2 / ((l1 + l2) * total)


@njit
def dce_keep_numba(points, closed, k, total):
    n = points.shape[0]
    prv = np.empty(n, dtype=np.int64)
    nxt = np.empty(n, dtype=np.int64)
    for i in range(n):
        prv[i] = i - 1
        nxt[i] = i + 1
    if closed:
        prv[0] = n - 1
        nxt[n - 1] = 0
    alive = np.ones(n, dtype=np.bool_)
    rel = np.empty(n, dtype=np.float64)
    for i in range(n):
        if not closed and (i == 0 or i == n - 1):
            rel[i] = np.inf
        else:
            a = prv[i]
            c = nxt[i]
            rel[i] = _relevance_nb(points[a, 0], points[a, 1], points[i, 0], points[i, 1],
                                   points[c, 0], points[c, 1], total)
    count = n
    while count > k:
        bval = np.inf
        for i in range(n):
            if alive[i] and rel[i] < bval:
                bval = rel[i]
        if bval == np.inf:
            break
        cut = bval * (1.0 + TIE_RTOL) + TIE_ATOL
        best = 0
        while not (alive[best] and rel[best] <= cut):
            best += 1
        alive[best] = False
        rel[best] = np.inf
        a = prv[best]
        c = nxt[best]
        nxt[a] = c
        prv[c] = a
        count -= 1
        for v in (a, c):
            if not closed and (v == 0 or v == n - 1):
                continue
            p = prv[v]
            q = nxt[v]
            rel[v] = _relevance_nb(points[p, 0], points[p, 1], points[v, 0], points[v, 1],
                                   points[q, 0], points[q, 1], total)
    out = np.empty(count, dtype=np.int64)
    j = 0
    for i in range(n):
        if alive[i]:
            out[j] = i
            j += 1
    return out


def dce_keep_numpy(points, closed, k, total):
    pts = np.asarray(points, dtype=np.float64)
    n = len(pts)
    prv = np.arange(n) - 1
    nxt = np.arange(n) + 1
    if closed:
        prv[0] = n - 1
        nxt[-1] = 0
    else:
        prv[0] = 0
        nxt[-1] = n - 1
    u = pts - pts[prv]
    v = pts[nxt] - pts
    l1 = np.sqrt(u[:, 0] * u[:, 0] + u[:, 1] * u[:, 1])
    l2 = np.sqrt(v[:, 0] * v[:, 0] + v[:, 1] * v[:, 1])
    turn = np.arctan2(np.abs(u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]), u[:, 0] * v[:, 0] + u[:, 1] * v[:, 1])
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(l1 + l2 > 0, turn * l1 * l2 / ((l1 + l2) * total), 0.0)
    if not closed:
        rel[0] = rel[-1] = np.inf
    alive = np.ones(n, dtype=bool)
    count = n
    xs = pts[:, 0].tolist()
    ys = pts[:, 1].tolist()
    while count > k:
        m = rel.min()
        if not np.isfinite(m):
            break
        best = int(np.argmax(rel <= m * (1.0 + TIE_RTOL) + TIE_ATOL))
        alive[best] = False
        rel[best] = np.inf
        a, c = prv[best], nxt[best]
        nxt[a] = c
        prv[c] = a
        count -= 1
        for w in (a, c):
            if not closed and (w == 0 or w == n - 1):
                continue
            p, q = prv[w], nxt[w]
            rel[w] = _relevance_py(xs[p], ys[p], xs[w], ys[w], xs[q], ys[q], total)
    return np.flatnonzero(alive)
