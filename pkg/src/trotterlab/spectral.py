"""Instantaneous eigensystems, adiabatic-basis populations, and the
step-unitary coupling diagnostics that exhibit self-healing.

Eigenframes along a ramp carry a continuity gauge: each vector is phased
so its overlap with the previous frame is real and nonnegative, and
degenerate clusters are aligned as subspaces.  Populations are sampled at
Trotter step boundaries, where the digitized recursion lives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidityError
from .pauli import PauliSum
from .propagators import (
    TrotterPlan,
    _dense_eig,
    _trotter_weights,
    frozen_step_unitary,
    hamiltonian_at,
)
from .schedules import Schedule

DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class EigenFrame:
    """Ascending energies and gauge-fixed eigenvector columns of H[u]."""

    u_value: float
    energies: np.ndarray
    vectors: np.ndarray

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.energies)


@dataclass(frozen=True)
class PopulationTrace:
    """Adiabatic-basis overlaps B_i and populations |B_i|^2 at step boundaries."""

    times: np.ndarray
    u_values: np.ndarray
    overlaps: np.ndarray     # shape (n_samples, dim)
    populations: np.ndarray  # |overlaps|^2

    def ground_deficit(self) -> np.ndarray:
        """1 - |B_1(t)| per sample."""
        return 1.0 - np.abs(self.overlaps[:, 0])

    def write_csv(self, path) -> None:
        dim = self.populations.shape[1]
        header = "t,u," + ",".join(f"pop_{i}" for i in range(dim))
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(header + "\n")
            for t, u, row in zip(self.times, self.u_values, self.populations):
                cells = [f"{t:.17g}", f"{u:.17g}"] + [f"{p:.17g}" for p in row]
                fh.write(",".join(cells) + "\n")


def _fix_first_frame(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for i in range(out.shape[1]):
        k = int(np.argmax(np.abs(out[:, i])))
        phase = out[k, i] / abs(out[k, i])
        out[:, i] *= np.conj(phase)
    return out


def _clusters(energies: np.ndarray, tol: float):
    """Index ranges of (near-)degenerate eigenvalue clusters."""
    edges = [0]
    for i in range(1, len(energies)):
        if energies[i] - energies[i - 1] >= tol:
            edges.append(i)
    edges.append(len(energies))
    return [(a, b) for a, b in zip(edges[:-1], edges[1:])]


def _gauge_against(prev: np.ndarray, vectors: np.ndarray, energies: np.ndarray,
                   tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Phase-fix (and subspace-align degenerate clusters) against prev."""
    out = vectors.copy()
    for a, b in _clusters(energies, tol):
        if b - a == 1:
            z = np.vdot(prev[:, a], out[:, a])
            if abs(z) > 1e-14:
                out[:, a] *= np.conj(z) / abs(z)
        else:
            m = prev[:, a:b].conj().T @ out[:, a:b]
            uu, _, vh = np.linalg.svd(m)
            out[:, a:b] = out[:, a:b] @ (vh.conj().T @ uu.conj().T)
    return out


def eigenframe_path(h1: PauliSum, h2: PauliSum, u_samples) -> list[EigenFrame]:
    """Eigenframes along sorted u samples, gauge fixed sequentially."""
    u_samples = np.asarray(u_samples, dtype=float)
    if np.any(np.diff(u_samples) < 0):
        raise ValidityError("u_samples must be sorted ascending")
    frames: list[EigenFrame] = []
    prev = None
    for u in u_samples:
        lam, vec = np.linalg.eigh(hamiltonian_at(h1, h2, float(u)))
        vec = _fix_first_frame(vec) if prev is None else _gauge_against(prev, vec, lam)
        frames.append(EigenFrame(u_value=float(u), energies=lam, vectors=vec))
        prev = vec
    return frames


def population_trace(h1: PauliSum, h2: PauliSum, sched: Schedule,
                     plan: TrotterPlan) -> PopulationTrace:
    """Step the digitized evolution and project on the instantaneous frames.

    The initial state is the ground vector of the first frame, so
    B_1 = 1 at t = 0 exactly.
    """
    edges, w = _trotter_weights(sched, plan)
    u_values = np.array([sched.ramp(t / sched.total_time) for t in edges])
    frames = eigenframe_path(h1, h2, u_values)

    _, la1, V1 = _dense_eig(h1)
    _, la2, V2 = _dense_eig(h2)
    psi = frames[0].vectors[:, 0].astype(complex)

    def apply(V, lam, weight, vec):
        return (V * np.exp(-1j * weight * lam)) @ (V.conj().T @ vec)

    overlaps = [frames[0].vectors.conj().T @ psi]
    r = len(edges) - 1
    for k in range(r):
        if plan.order == 1:
            w1, w2 = w[0][k], w[1][k]
            if plan.ordering == "H1_first":
                psi = apply(V2, la2, w2, apply(V1, la1, w1, psi))
            else:
                psi = apply(V1, la1, w1, apply(V2, la2, w2, psi))
        else:
            wa1, wa2, wb = w[0][k], w[1][k], w[2][k]
            if plan.ordering == "H1_first":
                psi = apply(V1, la1, wa2, apply(V2, la2, wb, apply(V1, la1, wa1, psi)))
            else:
                psi = apply(V2, la2, wa2, apply(V1, la1, wb, apply(V2, la2, wa1, psi)))
        overlaps.append(frames[k + 1].vectors.conj().T @ psi)

    overlaps = np.array(overlaps)
    return PopulationTrace(times=np.asarray(edges, dtype=float), u_values=u_values,
                           overlaps=overlaps, populations=np.abs(overlaps) ** 2)


def coupling_diagnostics(h1: PauliSum, h2: PauliSum, sched: Schedule,
                         T: float, dt: float, t: float,
                         ordering: str = "H1_first", fd_step: float = 1e-5):
    """The off-diagonal step-unitary couplings (R, S, Q) at time t.

    The step unitary freezes u at the step start, which makes the R
    couplings vanish identically at t = 0 and t = T.  Eigenvector
    derivatives (w.r.t. normalized time t/T) come from gauge-fixed central
    differences in u with step fd_step.
    """
    if not 0.0 <= t <= T * (1 + 1e-12):
        raise ValidityError(f"t={t} outside [0, {T}]")
    u = sched.value(min(t, T))
    lam, vec = np.linalg.eigh(hamiltonian_at(h1, h2, u))
    vec = _fix_first_frame(vec)
    dim = len(lam)

    step_u = frozen_step_unitary(h1, h2, u, dt, ordering)
    a_mat = vec.conj().T @ step_u @ vec

    def frame_at(uu):
        lam2, v2 = np.linalg.eigh(hamiltonian_at(h1, h2, uu))
        return _gauge_against(vec, v2, lam2)

    dvec_du = (frame_at(u + fd_step) - frame_at(u - fd_step)) / (2.0 * fd_step)
    s_prime = sched.derivative(min(t, T)) * T  # d(ramp)/d(normalized time)
    dvec = s_prime * dvec_du
    mdot = dvec.conj().T @ vec  # mdot[i, j] = <phi_i_dot | phi_j>

    off = ~np.eye(dim, dtype=bool)
    r_mat = np.zeros((dim, dim), dtype=complex)
    diag_corr = 1.0 + 2.0 * np.real(np.diag(mdot)) * (t / T)
    r_mat[off] = (a_mat * diag_corr[:, None] / dt)[off]
    s_mat = np.zeros((dim, dim), dtype=complex)
    s_mat[off] = (mdot * np.diag(a_mat)[None, :] / T)[off]
    q_mat = (mdot @ a_mat) / T
    return r_mat, s_mat, q_mat
