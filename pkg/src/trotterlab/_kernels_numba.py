"""Numba-jitted propagation kernels (twin of _kernels_numpy).

nogil lets sweep grid points run in threads; cache avoids recompiles
across processes.
"""

import numpy as np
from numba import njit

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def midpoint_product(h1, h2, u_mid, h):
    d = h1.shape[0]
    U = np.eye(d, dtype=np.complex128)
    for j in range(u_mid.shape[0]):
        u = u_mid[j]
        H = (1.0 - u) * h1 + u * h2
        w, V = np.linalg.eigh(H)
        phase = np.exp(-1j * h * w)
        U = (V * phase) @ (np.conj(V).T @ U)
    return U


@njit(**_JIT)
def midpoint_state(h1, h2, u_mid, h, psi0):
    psi = psi0.astype(np.complex128)
    for j in range(u_mid.shape[0]):
        u = u_mid[j]
        H = (1.0 - u) * h1 + u * h2
        w, V = np.linalg.eigh(H)
        phase = np.exp(-1j * h * w)
        psi = (V * phase) @ (np.conj(V).T @ psi)
    return psi


@njit(**_JIT)
def trotter1_product(Va, la, Vb, lb, wa, wb):
    d = Va.shape[0]
    W = np.conj(Vb).T @ Va
    Wd = np.conj(W).T
    Y = np.conj(Va).T.copy()
    for k in range(wa.shape[0]):
        da = np.exp(-1j * wa[k] * la)
        db = np.exp(-1j * wb[k] * lb)
        Y = Wd @ (db.reshape(d, 1) * (W @ (da.reshape(d, 1) * Y)))
    return Va @ Y


@njit(**_JIT)
def trotter1_state(Va, la, Vb, lb, wa, wb, psi0):
    W = np.conj(Vb).T @ Va
    Wd = np.conj(W).T
    y = np.conj(Va).T @ psi0.astype(np.complex128)
    for k in range(wa.shape[0]):
        da = np.exp(-1j * wa[k] * la)
        db = np.exp(-1j * wb[k] * lb)
        y = Wd @ (db * (W @ (da * y)))
    return Va @ y


@njit(**_JIT)
def trotter2_product(Va, la, Vb, lb, wa1, wa2, wb):
    d = Va.shape[0]
    W = np.conj(Vb).T @ Va
    Wd = np.conj(W).T
    Y = np.conj(Va).T.copy()
    for k in range(wa1.shape[0]):
        d1 = np.exp(-1j * wa1[k] * la)
        d2 = np.exp(-1j * wb[k] * lb)
        d3 = np.exp(-1j * wa2[k] * la)
        Y = d3.reshape(d, 1) * (Wd @ (d2.reshape(d, 1) * (W @ (d1.reshape(d, 1) * Y))))
    return Va @ Y


@njit(**_JIT)
def trotter2_state(Va, la, Vb, lb, wa1, wa2, wb, psi0):
    W = np.conj(Vb).T @ Va
    Wd = np.conj(W).T
    y = np.conj(Va).T @ psi0.astype(np.complex128)
    for k in range(wa1.shape[0]):
        d1 = np.exp(-1j * wa1[k] * la)
        d2 = np.exp(-1j * wb[k] * lb)
        d3 = np.exp(-1j * wa2[k] * la)
        y = d3 * (Wd @ (d2 * (W @ (d1 * y))))
    return Va @ y


@njit(**_JIT)
def piecewise_constant_state(hams, dts, psi0):
    psi = psi0.astype(np.complex128)
    for k in range(dts.shape[0]):
        w, V = np.linalg.eigh(hams[k])
        phase = np.exp(-1j * dts[k] * w)
        psi = (V * phase) @ (np.conj(V).T @ psi)
    return psi
