"""All-pairs chi-squared distance between histogram rows."""

import numpy as np

from .._backend import njit


@njit
def chi2_matrix_numba(h):
    n, k = h.shape
    out = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for b in range(k):
                s = h[i, b] + h[j, b]
                if s > 0.0:
                    d = h[i, b] - h[j, b]
                    acc += d * d / s
            out[i, j] = 0.5 * acc
            out[j, i] = 0.5 * acc
    return out


def chi2_matrix_numpy(h, chunk=128):
    h = np.asarray(h, dtype=np.float64)
    n = len(h)
    out = np.empty((n, n))
    for start in range(0, n, chunk):
        blk = h[start:start + chunk, None, :]
        s = blk + h[None, :, :]
        d = blk - h[None, :, :]
        with np.errstate(invalid="ignore", divide="ignore"):
            q = np.where(s > 0, d * d / s, 0.0)
        out[start:start + chunk] = 0.5 * q.sum(axis=2)
    np.fill_diagonal(out, 0.0)
    return 0.5 * (out + out.T)
