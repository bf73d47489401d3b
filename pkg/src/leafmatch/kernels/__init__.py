"""Hot loops, each with a numba and a pure-numpy implementation.

The public names dispatch on :func:`leafmatch._backend.get_backend` at call
time, so switching backends never requires a re-import.
"""

from .._backend import get_backend
from .chi2 import chi2_matrix_numba, chi2_matrix_numpy
from .dce import dce_keep_numba, dce_keep_numpy
from .gnccp import fw_gradient_numba, fw_gradient_numpy, fw_step_numba, fw_step_numpy
from .gnccp import quartic_argmin as _quartic_argmin
from .frechet import frechet_table_numba, frechet_table_numpy, frechet_value_numba, frechet_value_numpy
from .resample import equal_chord_numba, equal_chord_numpy
from .subgraph import subgraph_search_numba, subgraph_search_numpy

_TABLE = {
    "chi2_matrix": (chi2_matrix_numba, chi2_matrix_numpy),
    "dce_keep": (dce_keep_numba, dce_keep_numpy),
    "frechet_table": (frechet_table_numba, frechet_table_numpy),
    "frechet_value": (frechet_value_numba, frechet_value_numpy),
    "equal_chord": (equal_chord_numba, equal_chord_numpy),
    "fw_gradient": (fw_gradient_numba, fw_gradient_numpy),
    "fw_step": (fw_step_numba, fw_step_numpy),
    "subgraph_search": (subgraph_search_numba, subgraph_search_numpy),
}


def kernel(name, backend=None):
    """Return the implementation of kernel ``name`` for ``backend`` (default: active)."""
    numba_impl, numpy_impl = _TABLE[name]
    return numba_impl if (backend or get_backend()) == "numba" else numpy_impl


def chi2_matrix(h):
    return kernel("chi2_matrix")(h)


def dce_keep(points, closed, k, total):
    return kernel("dce_keep")(points, closed, k, total)


def frechet_table(dist):
    return kernel("frechet_table")(dist)


def frechet_value(p, q):
    return kernel("frechet_value")(p, q)


def equal_chord(xs, ys, nsteps, total):
    return kernel("equal_chord")(xs, ys, nsteps, total)


def subgraph_search(*args):
    return kernel("subgraph_search")(*args)


def fw_gradient(A, C0, XB, X, zeta, scale):
    return kernel("fw_gradient")(A, C0, XB, X, zeta, scale)


def fw_step(A, B, X, XB, C0, trX, cols, zeta, scale):
    return kernel("fw_step")(A, B, X, XB, C0, trX, cols, zeta, scale)


def quartic_argmin(c):
    return _quartic_argmin(c, get_backend())
