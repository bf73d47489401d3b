"""Frank-Wolfe inner step of the GNCCP path.

The step moves X toward a partial permutation Y given by ``cols`` (row i of
Y has its one in column ``cols[i]``). With the weights folded into the
stacked matrices A (K, M, M) and B (K, N, N), the running products

    XB = X @ B        (K, M, N)
    C0 = XB @ X.T     (K, M, M)

are updated in place, since Y B and X B Y^T are plain gathers.

``fw_gradient`` returns the gradient of the scaled path objective.
``fw_step`` returns ``(status, alpha, trX, value)`` with status 0 for a step,
1 when X already equals Y and 2 when the best step length is zero.
"""

import numpy as np

from .._backend import njit


@njit
def _quartic_argmin(c0, c1, c2, c3, c4):
    def p(a):
        return c0 + a * (c1 + a * (c2 + a * (c3 + a * c4)))

    def dp(a):
        return c1 + a * (2.0 * c2 + a * (3.0 * c3 + a * 4.0 * c4))

    # the derivative is monotone between the roots of the second derivative,
    # so each interior minimum is bracketed by a - to + sign change
    qa, qb, qc = 12.0 * c4, 6.0 * c3, 2.0 * c2
    br = np.empty(4)
    br[0] = 0.0
    nb = 1
    if qa != 0.0:
        disc = qb * qb - 4.0 * qa * qc
        if disc > 0.0:
            sq = np.sqrt(disc)
            # numerically stable pair of quadratic roots
            q = -0.5 * (qb + sq) if qb >= 0.0 else -0.5 * (qb - sq)
            r1 = q / qa
            r2 = qc / q if q != 0.0 else r1
            lo, hi = (r1, r2) if r1 <= r2 else (r2, r1)
            if 0.0 < lo < 1.0:
                br[nb] = lo
                nb += 1
            if 0.0 < hi < 1.0 and hi != lo:
                br[nb] = hi
                nb += 1
    elif qb != 0.0:
        r = -qc / qb
        if 0.0 < r < 1.0:
            br[nb] = r
            nb += 1
    br[nb] = 1.0
    nb += 1
    best_a = 0.0
    best_v = p(0.0)
    for t in range(nb - 1):
        lo = br[t]
        hi = br[t + 1]
        if not (dp(lo) < 0.0 < dp(hi)):
            continue
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if dp(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        a = 0.5 * (lo + hi)
        v = p(a)
        if v < best_v:
            best_a, best_v = a, v
    if p(1.0) < best_v:
        best_a = 1.0
    return best_a


def _py(fn):
    return getattr(fn, "py_func", fn)


def quartic_argmin(c, backend="numba"):
    """Smallest minimizer over [0, 1] of sum c[i] a^i (degree <= 4)."""
    fn = _quartic_argmin if backend == "numba" else _py(_quartic_argmin)
    return fn(*(float(v) for v in c))


@njit
def fw_gradient_numba(A, C0, XB, X, zeta, scale):
    K, M, N = XB.shape
    gF = np.zeros((M, N))
    for k in range(K):
        gF += np.dot(A[k] - C0[k], XB[k])
    return (1.0 - abs(zeta)) * (-4.0 / scale) * gF + 2.0 * zeta * X


def fw_gradient_numpy(A, C0, XB, X, zeta, scale):
    gF = np.matmul(A - C0, XB).sum(axis=0)
    return (1.0 - abs(zeta)) * (-4.0 / scale) * gF + 2.0 * zeta * X


@njit
def fw_step_numba(A, B, X, XB, C0, trX, cols, zeta, scale):
    K, M, N = XB.shape
    xy = 0.0
    for i in range(M):
        xy += X[i, cols[i]]
    if xy >= M - 1e-15:
        return 1, 0.0, trX, np.nan
    f0 = 0.0
    f1 = 0.0
    f2a = 0.0
    f2b = 0.0
    f3 = 0.0
    f4 = 0.0
    for k in range(K):
        for i in range(M):
            ci = cols[i]
            for j in range(M):
                cj = cols[j]
                e = XB[k, i, cj] + XB[k, j, ci]
                c0 = C0[k, i, j]
                r0 = A[k, i, j] - c0
                c1 = e - 2.0 * c0
                c2 = B[k, ci, cj] - e + c0
                f0 += r0 * r0
                f1 += r0 * c1
                f2a += c1 * c1
                f2b += r0 * c2
                f3 += c1 * c2
                f4 += c2 * c2
    u = (1.0 - abs(zeta)) / scale
    a0 = u * f0 + zeta * trX
    a1 = u * (-2.0 * f1) + zeta * 2.0 * (xy - trX)
    a2 = u * (f2a - 2.0 * f2b) + zeta * (M - 2.0 * xy + trX)
    a3 = u * (2.0 * f3)
    a4 = u * f4
    alpha = _quartic_argmin(a0, a1, a2, a3, a4)
    if alpha == 0.0:
        return 2, 0.0, trX, a0
    for k in range(K):
        for i in range(M):
            ci = cols[i]
            for j in range(M):
                cj = cols[j]
                e = XB[k, i, cj] + XB[k, j, ci]
                c0 = C0[k, i, j]
                C0[k, i, j] = c0 + alpha * (e - 2.0 * c0) + alpha * alpha * (B[k, ci, cj] - e + c0)
        for i in range(M):
            ci = cols[i]
            for j in range(N):
                XB[k, i, j] += alpha * (B[k, ci, j] - XB[k, i, j])
    for i in range(M):
        for j in range(N):
            X[i, j] *= 1.0 - alpha
        X[i, cols[i]] += alpha
    trX = trX + alpha * 2.0 * (xy - trX) + alpha * alpha * (M - 2.0 * xy + trX)
    value = a0 + alpha * (a1 + alpha * (a2 + alpha * (a3 + alpha * a4)))
    return 0, alpha, trX, value


def fw_step_numpy(A, B, X, XB, C0, trX, cols, zeta, scale):
    M = X.shape[0]
    rows = np.arange(M)
    xy = float(X[rows, cols].sum())
    if xy >= M - 1e-15:
        return 1, 0.0, trX, np.nan
    E = XB[:, :, cols]
    Es = E + np.swapaxes(E, 1, 2)
    C1 = Es - 2.0 * C0
    C2 = B[:, cols][:, :, cols] - Es + C0
    R0 = A - C0

    def dot(P, Q):
        return float(np.dot(P.ravel(), Q.ravel()))

    u = (1.0 - abs(zeta)) / scale
    a = (
        u * dot(R0, R0) + zeta * trX,
        u * (-2.0 * dot(R0, C1)) + zeta * 2.0 * (xy - trX),
        u * (dot(C1, C1) - 2.0 * dot(R0, C2)) + zeta * (M - 2.0 * xy + trX),
        u * (2.0 * dot(C1, C2)),
        u * dot(C2, C2),
    )
    alpha = _py(_quartic_argmin)(*a)
    if alpha == 0.0:
        return 2, 0.0, trX, a[0]
    C0 += alpha * C1 + alpha * alpha * C2
    XB += alpha * (B[:, cols, :] - XB)
    X *= 1.0 - alpha
    X[rows, cols] += alpha
    trX = trX + alpha * 2.0 * (xy - trX) + alpha * alpha * (M - 2.0 * xy + trX)
    return 0, alpha, trX, a[0] + alpha * (a[1] + alpha * (a[2] + alpha * (a[3] + alpha * a[4])))
