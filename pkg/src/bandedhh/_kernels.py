"""Hot loops for applying banded reflection products.

Each kernel exists twice: a numba @njit version and a pure-numpy version.
The numba path is used when numba imports cleanly; set BANDEDHH_NO_NUMBA=1
to force the numpy fallback. Both variants stay importable so benchmarks
can compare them.

Kernels mutate their x argument in place and assume float64 C-contiguous
arrays; the public wrappers in apply.py take care of copies and checks.
"""

import os

import numpy as np

NUMBA_DISABLED = os.environ.get("BANDEDHH_NO_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
    "on",
)

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled via BANDEDHH_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def apply_banded_numpy(free, betas, x, forward):
    """Apply the reflection product (forward) or its transpose to x."""
    k, w = free.shape
    order = range(k - 1, -1, -1) if forward else range(k)
    for i in order:
        beta = betas[i]
        if beta == 0.0:
            continue
        tail = free[i]
        seg = x[i + 1 : i + 1 + w]
        t = beta * (x[i] + tail @ seg)
        x[i] -= t
        seg -= t * tail
    return x


def apply_banded_matrix_numpy(free, betas, xmat, forward):
    """Column-wise variant of apply_banded_numpy."""
    k, w = free.shape
    order = range(k - 1, -1, -1) if forward else range(k)
    for i in order:
        beta = betas[i]
        if beta == 0.0:
            continue
        tail = free[i]
        rows = xmat[i + 1 : i + 1 + w]
        t = beta * (xmat[i] + tail @ rows)
        xmat[i] -= t
        rows -= np.outer(tail, t)
    return xmat


if HAVE_NUMBA:

    @njit(cache=True)
    def apply_banded_numba(free, betas, x, forward):
        k, w = free.shape
        if forward:
            start, stop, step = k - 1, -1, -1
        else:
            start, stop, step = 0, k, 1
        for i in range(start, stop, step):
            beta = betas[i]
            if beta == 0.0:
                continue
            t = x[i]
            for j in range(w):
                t += free[i, j] * x[i + 1 + j]
            t *= beta
            x[i] -= t
            for j in range(w):
                x[i + 1 + j] -= t * free[i, j]
        return x

    @njit(cache=True)
    def apply_banded_matrix_numba(free, betas, xmat, forward):
        k, w = free.shape
        ncols = xmat.shape[1]
        t = np.empty(ncols)
        if forward:
            start, stop, step = k - 1, -1, -1
        else:
            start, stop, step = 0, k, 1
        for i in range(start, stop, step):
            beta = betas[i]
            if beta == 0.0:
                continue
            for c in range(ncols):
                t[c] = xmat[i, c]
            for j in range(w):
                f = free[i, j]
                row = i + 1 + j
                for c in range(ncols):
                    t[c] += f * xmat[row, c]
            for c in range(ncols):
                t[c] *= beta
                xmat[i, c] -= t[c]
            for j in range(w):
                f = free[i, j]
                row = i + 1 + j
                for c in range(ncols):
                    xmat[row, c] -= t[c] * f
        return xmat

    apply_banded = apply_banded_numba
    apply_banded_matrix = apply_banded_matrix_numba
else:
    apply_banded_numba = None
    apply_banded_matrix_numba = None
    apply_banded = apply_banded_numpy
    apply_banded_matrix = apply_banded_matrix_numpy


def backend() -> str:
    """Name of the active kernel backend, 'numba' or 'numpy'."""
    return "numba" if HAVE_NUMBA else "numpy"
