"""Graduated non-convexity and concavity over (partial) permutation matrices.

The objective is the quadratic matching energy

    F(X) = sum_k w_k ||A_k - X B_k X^T||_F^2,

relaxed to the set of M x N matrices with unit row sums and column sums at
most one, and deformed by the path

    F_zeta(X) = (1 - |zeta|) F(X) + zeta tr(X^T X),   zeta: 1 -> -1,

which is convex at zeta = 1 and concave at zeta = -1, so the Frank-Wolfe
iterates are driven to a vertex (a partial permutation) as zeta decreases.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import kernels
from .energy import EnergyWeights

VERTEX_TOL = 1e-6


@dataclass(frozen=True)
class GnccpConfig:
    d_zeta: float = 0.05
    inner_tol: float = 1e-6
    max_inner: int = 100
    line_search_tol: float = 1e-8

    def __post_init__(self):
        if not 0 < self.d_zeta < 2:
            raise ValueError("d_zeta must lie in (0, 2)")
        if self.max_inner < 1:
            raise ValueError("max_inner must be >= 1")


@dataclass
class AssignmentState:
    X: np.ndarray
    zeta: float
    objective: float
    status: str = "running"
    iterations: int = 0

    @property
    def assignment(self):
        """Column matched to each row (valid once X is a partial permutation)."""
        return np.argmax(self.X, axis=1)


def f_zeta(X, zeta, F):
    """Path objective for a given value ``F`` of the energy at ``X``."""
    X = np.asarray(X, dtype=np.float64)
    tr = float(np.sum(X * X))
    return (1.0 - abs(zeta)) * F + zeta * tr


def _stack(bundle_p, bundle_q, weights):
    w = weights.as_array()
    keep = w > 0
    A = np.stack([m for m, k in zip(bundle_p.matrices, keep) if k])
    B = np.stack([m for m, k in zip(bundle_q.matrices, keep) if k])
    return w[keep], A, B


def energy(X, A, B, w):
    """F(X) for stacked matrices ``A`` (K, M, M), ``B`` (K, N, N) and weights ``w``."""
    R = A - X @ B @ X.T
    return float(np.einsum("k,kij,kij->", w, R, R))


def gradient(X, A, B, w):
    """dF/dX for stacked (not necessarily symmetric) matrices."""
    R = A - X @ B @ X.T
    G = R @ X @ np.swapaxes(B, 1, 2) + np.swapaxes(R, 1, 2) @ X @ B
    return -2.0 * np.einsum("k,kij->ij", w, G)


def zeta_gradient(X, zeta, A, B, w, scale=1.0):
    """Gradient of ``f_zeta`` with F divided by ``scale``."""
    return (1.0 - abs(zeta)) * gradient(X, A, B, w) / scale + 2.0 * zeta * X


def linear_subproblem(grad):
    """Partial permutation Y minimizing tr(grad^T Y) (rectangular M <= N)."""
    grad = np.asarray(grad, dtype=np.float64)
    if not np.all(np.isfinite(grad)):
        raise ValueError("gradient must be finite")
    m, n = grad.shape
    if m > n:
        raise ValueError("need M <= N")
    rows, cols = linear_sum_assignment(grad)
    Y = np.zeros((m, n))
    Y[rows, cols] = 1.0
    return Y


def line_search(phi, tol=1e-8):
    """Golden-section minimization of ``phi`` over [0, 1].

    Exact for unimodal ``phi``; the end points are also evaluated so that a
    monotone function returns the better end.
    """
    g = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 0.0, 1.0
    x1 = hi - g * (hi - lo)
    x2 = lo + g * (hi - lo)
    f1, f2 = phi(x1), phi(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = phi(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = phi(x2)
    mid = 0.5 * (lo + hi)
    best = min((phi(0.0), 0.0), (phi(mid), mid), (phi(1.0), 1.0))
    return best[1]


def quartic_minimizer(c):
    """Minimizer over [0, 1] of c[0] + c[1] a + c[2] a^2 + c[3] a^3 + c[4] a^4.

    Interior minima are bracketed between the roots of the second derivative
    and bisected to machine precision; the smallest value wins, with ties
    resolved toward the smaller step.
    """
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (5,) or not np.all(np.isfinite(c)):
        raise ValueError("need 5 finite coefficients")
    return float(kernels.quartic_argmin(c))


def _step_coefficients(X, D, A, B, w, zeta, scale):
    # f_zeta(X + a D) as a quartic in a
    XB = X @ B
    DB = D @ B
    R0 = A - XB @ X.T
    C1 = DB @ X.T + XB @ D.T
    C2 = DB @ D.T

    def dot(P, Q):
        return float(np.einsum("k,kij,kij->", w, P, Q))

    fcoef = np.array([
        dot(R0, R0),
        -2.0 * dot(R0, C1),
        dot(C1, C1) - 2.0 * dot(R0, C2),
        2.0 * dot(C1, C2),
        dot(C2, C2),
    ]) / scale
    tcoef = np.array([np.sum(X * X), 2.0 * np.sum(X * D), np.sum(D * D), 0.0, 0.0])
    return (1.0 - abs(zeta)) * fcoef + zeta * tcoef


def is_vertex(X, tol=VERTEX_TOL):
    return bool(np.all(np.minimum(np.abs(X), np.abs(X - 1.0)) <= tol))


def round_to_permutation(X):
    """Nearest partial permutation (maximum total overlap with X)."""
    return linear_subproblem(-np.asarray(X))


def _dot(P, Q):
    return float(np.dot(P.ravel(), Q.ravel()))


def gnccp_optimize(bundle_p, bundle_q, weights=EnergyWeights(), cfg=GnccpConfig(), callback=None):
    """Minimize the matching energy over partial permutations.

    ``bundle_p`` is the smaller (M-node) side and all matrices must be
    symmetric. The energy is divided by a fixed positive constant during the
    path so that it is commensurate with the tr(X^T X) term whatever the
    units of the adjacency matrices; this rescaling does not move the
    minimizers of F.

    Each Frank-Wolfe step moves toward a partial permutation Y, so Y B,
    X B Y^T and Y B Y^T are row/column gathers and X B, X B X^T can be
    updated in place (see :mod:`leafmatch.kernels.gnccp`); one batched
    matrix product (for the gradient) remains per iteration.

    ``callback(X, zeta, value)``, if given, is called after every inner
    iteration with the current iterate and its path objective (F scaled).

    Returns
    -------
    state : AssignmentState
        Final 0/1 matrix, the zeta reached, and ``status`` "vertex" when the
        path ended on a vertex or "rounded" when rounding was needed.
    energy : float
        Matching energy at the final permutation.
    """
    M, N = bundle_p.size, bundle_q.size
    if M > N:
        raise ValueError("bundle_p must not have more nodes than bundle_q")
    w, A, B = _stack(bundle_p, bundle_q, weights)
    if not (np.allclose(A, np.swapaxes(A, 1, 2)) and np.allclose(B, np.swapaxes(B, 1, 2))):
        raise ValueError("adjacency matrices must be symmetric")
    # fold the weights into the matrices so every inner product is a plain dot
    sw = np.sqrt(w)[:, None, None]
    A, B = np.ascontiguousarray(A * sw), np.ascontiguousarray(B * sw)
    scale = (_dot(A, A) + _dot(B, B)) / M
    if not scale > 0:
        scale = 1.0
    X = np.full((M, N), 1.0 / N)
    zeta = 1.0
    iters = 0
    status = "rounded"
    while zeta > -1.0 - 1e-12:
        # refresh the running products once per zeta to stop drift
        XB = np.ascontiguousarray(np.matmul(X, B))
        C0 = np.ascontiguousarray(np.matmul(XB, X.T))
        trX = float(np.sum(X * X))
        prev = None
        for _ in range(cfg.max_inner):
            iters += 1
            grad = kernels.fw_gradient(A, C0, XB, X, zeta, scale)
            cols = linear_sum_assignment(grad)[1].astype(np.int64)
            flag, alpha, trX, cur = kernels.fw_step(A, B, X, XB, C0, trX, cols, zeta, scale)
            if flag:
                break  # X is the vertex Y, or no step improves
            if callback is not None:
                callback(X, zeta, cur)
            if prev is not None and abs(prev - cur) <= cfg.inner_tol * max(abs(prev), 1e-12):
                break
            prev = cur
        if is_vertex(X):
            status = "vertex"
            break
        if zeta <= -1.0 + 1e-12:
            break
        zeta = max(zeta - cfg.d_zeta, -1.0)
    Xp = round_to_permutation(X)
    F = energy(Xp, A, B, np.ones_like(w))
    obj = f_zeta(Xp, zeta, F / scale)
    return AssignmentState(Xp, zeta, obj, status, iters), F
