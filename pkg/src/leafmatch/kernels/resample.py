"""Equal-chord ("divider") resampling of a polyline.

A walk of ``nsteps`` compass steps of radius ``c`` is taken along the polyline
starting at its first vertex; each step lands on the first point ahead whose
Euclidean distance from the current point equals ``c``. ``c`` is bisected
until the final step lands on the last vertex, which makes every consecutive
chord of the output equal.
"""

import math

import numpy as np

from .._backend import njit


def _walk(xs, ys, m, c, nsteps, outx, outy):
    # Returns the number of completed steps; < nsteps means the walk ran off the end.
    seg = 0
    t = 0.0
    qx = xs[0]
    qy = ys[0]
    c2 = c * c
    for step in range(nsteps):
        found = False
        while seg < m - 1:
            ax = xs[seg]
            ay = ys[seg]
            dx = xs[seg + 1] - ax
            dy = ys[seg + 1] - ay
            a = dx * dx + dy * dy
            if a > 0.0:
                ex = ax - qx
                ey = ay - qy
                b = 2.0 * (ex * dx + ey * dy)
                cc = ex * ex + ey * ey - c2
                disc = b * b - 4.0 * a * cc
                if disc >= 0.0:
                    tau = (-b + math.sqrt(disc)) / (2.0 * a)
                    if tau >= t and tau <= 1.0:
                        t = tau
                        qx = ax + tau * dx
                        qy = ay + tau * dy
                        found = True
                        break
            seg += 1
            t = 0.0
        if not found:
            return step
        outx[step] = qx
        outy[step] = qy
    return nsteps


_walk_nb = njit(_walk)


@njit
def equal_chord_numba(xs, ys, nsteps, total):
    m = xs.shape[0]
    outx = np.empty(nsteps, dtype=np.float64)
    outy = np.empty(nsteps, dtype=np.float64)
    lo = 0.0
    hi = total * (1.0 + 1e-9) + 1e-300
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _walk_nb(xs, ys, m, mid, nsteps, outx, outy) == nsteps:
            lo = mid
        else:
            hi = mid
    done = _walk_nb(xs, ys, m, lo, nsteps, outx, outy)
    return lo, done, outx, outy


def equal_chord_numpy(xs, ys, nsteps, total):
    xl = np.asarray(xs, dtype=np.float64).tolist()
    yl = np.asarray(ys, dtype=np.float64).tolist()
    m = len(xl)
    outx = [0.0] * nsteps
    outy = [0.0] * nsteps
    lo = 0.0
    hi = total * (1.0 + 1e-9) + 1e-300
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _walk(xl, yl, m, mid, nsteps, outx, outy) == nsteps:
            lo = mid
        else:
            hi = mid
    done = _walk(xl, yl, m, lo, nsteps, outx, outy)
    return lo, done, np.array(outx), np.array(outy)
