"""Backend dispatch for the hot propagation kernels.

TROTTERLAB_KERNELS selects the backend:

* ``auto`` (default) - jitted kernels for small Hilbert dimensions, BLAS
  via the pure-numpy twin above ``AUTO_NUMBA_MAX_DIM`` where LAPACK calls
  dominate and jitting buys nothing.
* ``numba`` - force the jitted path.
* ``numpy`` - force the pure-numpy path (also the fallback when numba is
  not importable).

``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import os

from . import _kernels_numpy

AUTO_NUMBA_MAX_DIM = 16

_MODE = os.environ.get("TROTTERLAB_KERNELS", "auto").lower()
if _MODE not in ("auto", "numba", "numpy"):
    raise ValueError(f"TROTTERLAB_KERNELS must be auto|numba|numpy, got {_MODE!r}")

if _MODE in ("auto", "numba"):
    try:
        from . import _kernels_numba
    except ImportError:
        if _MODE == "numba":
            raise
        _kernels_numba = None
        _MODE = "numpy"
else:
    _kernels_numba = None


def backend_name() -> str:
    return _MODE


def _impl(dim: int):
    if _MODE == "numpy":
        return _kernels_numpy
    if _MODE == "numba":
        return _kernels_numba
    return _kernels_numba if dim <= AUTO_NUMBA_MAX_DIM else _kernels_numpy


def midpoint_product(h1, h2, u_mid, h):
    return _impl(h1.shape[0]).midpoint_product(h1, h2, u_mid, h)


def midpoint_state(h1, h2, u_mid, h, psi0):
    return _impl(h1.shape[0]).midpoint_state(h1, h2, u_mid, h, psi0)


def trotter1_product(Va, la, Vb, lb, wa, wb):
    return _impl(Va.shape[0]).trotter1_product(Va, la, Vb, lb, wa, wb)


def trotter1_state(Va, la, Vb, lb, wa, wb, psi0):
    return _impl(Va.shape[0]).trotter1_state(Va, la, Vb, lb, wa, wb, psi0)


def trotter2_product(Va, la, Vb, lb, wa1, wa2, wb):
    return _impl(Va.shape[0]).trotter2_product(Va, la, Vb, lb, wa1, wa2, wb)


def trotter2_state(Va, la, Vb, lb, wa1, wa2, wb, psi0):
    return _impl(Va.shape[0]).trotter2_state(Va, la, Vb, lb, wa1, wa2, wb, psi0)


def piecewise_constant_state(hams, dts, psi0):
    return _impl(psi0.shape[0]).piecewise_constant_state(hams, dts, psi0)
