"""Exact and Trotterized evolution of interpolating Hamiltonians.

H[u] = (1-u) H1 + u H2 is driven along a schedule; the digitized
evolution multiplies per-step factors exp(-i w2 H2) exp(-i w1 H1) with
exact step integrals (w1, w2), while the exact reference is a
midpoint-rule product of piecewise-constant exponentials refined by step
halving with Richardson extrapolation until successive refinements agree
to the requested tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import ConvergenceError, DimensionError, ValidityError
from .pauli import PauliSum, operator_norm, to_dense
from .schedules import Schedule

ORDERINGS = ("H1_first", "H2_first")

# Complex vectors/matrices are plain ndarrays throughout; StateVector and
# DenseOperator name the roles, not wrapper classes.
StateVector = np.ndarray
DenseOperator = np.ndarray


@dataclass(frozen=True)
class TrotterPlan:
    """Order, step size, operator ordering and partial-ramp fraction.

    fraction f < 1 evolves the same schedule only to t = f*T; the final
    step is shortened (or stretched, up to 1.5*dt) so the integrated time
    is exactly f*T.
    """

    dt: float
    order: int = 1
    ordering: str = "H1_first"
    fraction: float = 1.0

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValidityError(f"order must be 1 or 2, got {self.order}")
        if self.dt <= 0:
            raise ValidityError("dt must be positive")
        if self.ordering not in ORDERINGS:
            raise ValidityError(f"ordering must be one of {ORDERINGS}")
        if not 0 < self.fraction <= 1:
            raise ValidityError("fraction must lie in (0, 1]")

    def step_edges(self, total_time: float) -> np.ndarray:
        """Step boundaries 0 = t_0 < ... < t_r = fraction*T."""
        t_final = self.fraction * total_time
        r = max(1, int(round(t_final / self.dt)))
        edges = self.dt * np.arange(r + 1, dtype=float)
        edges[r] = t_final
        if edges[r] <= edges[r - 1]:
            raise ValidityError("final partial step has non-positive length")
        return edges

    def step_count(self, total_time: float) -> int:
        return len(self.step_edges(total_time)) - 1


@lru_cache(maxsize=128)
def _dense_eig(h: PauliSum):
    """Dense matrix and eigendecomposition of a Hermitian PauliSum (cached)."""
    if not h.is_hermitian():
        raise ValidityError("propagation requires a Hermitian (phase-free) PauliSum")
    m = to_dense(h)
    lam, V = np.linalg.eigh(m)
    return m, lam, V


def hamiltonian_at(h1: PauliSum, h2: PauliSum, u: float) -> DenseOperator:
    """Dense H[u] = (1-u) H1 + u H2."""
    m1, _, _ = _dense_eig(h1)
    m2, _, _ = _dense_eig(h2)
    return (1.0 - u) * m1 + u * m2


def max_hamiltonian_norm(h1: PauliSum, h2: PauliSum, sched: Schedule,
                         t_end: float | None = None) -> float:
    """max over t in [0, t_end] of ||H[u(t)]||.

    ||H[u]|| is convex in u, so the maximum sits at an endpoint of the
    traversed u-interval.
    """
    if t_end is None:
        t_end = sched.total_time
    if sched.ramp_kind == "tabulated":
        # possibly non-monotone; bound by the full u-range [0, 1]
        u_lo, u_hi = 0.0, 1.0
    else:
        u_lo, u_hi = sched.value(0.0), sched.value(t_end)
    return max(operator_norm(hamiltonian_at(h1, h2, u_lo)),
               operator_norm(hamiltonian_at(h1, h2, u_hi)))


def is_convergent(plan: TrotterPlan, h1: PauliSum, h2: PauliSum, sched: Schedule) -> bool:
    """Convergence guard: dt * max_t ||H[u(t)]|| < pi (product-formula expansion convergent)."""
    return plan.dt * max_hamiltonian_norm(h1, h2, sched, plan.fraction * sched.total_time) < np.pi


def expm_hermitian(h: DenseOperator, angle: float, herm_tol: float = 1e-10) -> DenseOperator:
    """exp(-i * angle * h) for Hermitian h, via eigendecomposition."""
    h = np.asarray(h, dtype=complex)
    if np.abs(h - h.conj().T).max() > herm_tol:
        raise ValidityError("matrix is not Hermitian within tolerance")
    lam, V = np.linalg.eigh(h)
    return (V * np.exp(-1j * angle * lam)) @ V.conj().T


def _check_pair(h1: PauliSum, h2: PauliSum):
    if h1.qubit_count != h2.qubit_count:
        raise DimensionError("H1 and H2 act on different qubit counts")


def _trotter_weights(sched: Schedule, plan: TrotterPlan):
    """Per-step factor weights for the planned digitized evolution."""
    edges = plan.step_edges(sched.total_time)
    r = len(edges) - 1
    w1 = np.empty(r)
    w2 = np.empty(r)
    if plan.order == 1:
        for k in range(r):
            si = sched.step_integrals(edges[k], edges[k + 1])
            w1[k], w2[k] = si.w1, si.w2
        return edges, (w1, w2)
    # order 2: the first-slot operator is split at the step midpoint
    wa1 = np.empty(r)
    wa2 = np.empty(r)
    for k in range(r):
        mid = 0.5 * (edges[k] + edges[k + 1])
        first = sched.step_integrals(edges[k], mid)
        second = sched.step_integrals(mid, edges[k + 1])
        full_w1 = first.w1 + second.w1
        full_w2 = first.w2 + second.w2
        if plan.ordering == "H1_first":
            wa1[k], wa2[k] = first.w1, second.w1
            w2[k] = full_w2
        else:
            wa1[k], wa2[k] = first.w2, second.w2
            w2[k] = full_w1
    return edges, (wa1, wa2, w2)


def trotter_unitary(h1: PauliSum, h2: PauliSum, sched: Schedule,
                    plan: TrotterPlan) -> DenseOperator:
    """Digitized evolution operator U^(1) or U^(2) for the plan."""
    _check_pair(h1, h2)
    _, la1, V1 = _dense_eig(h1)
    _, la2, V2 = _dense_eig(h2)
    _, w = _trotter_weights(sched, plan)
    if plan.order == 1:
        w1, w2 = w
        if plan.ordering == "H1_first":
            return kernels.trotter1_product(V1, la1, V2, la2, w1, w2)
        return kernels.trotter1_product(V2, la2, V1, la1, w2, w1)
    wa1, wa2, wb = w
    if plan.ordering == "H1_first":
        return kernels.trotter2_product(V1, la1, V2, la2, wa1, wa2, wb)
    return kernels.trotter2_product(V2, la2, V1, la1, wa1, wa2, wb)


def trotter_state(h1: PauliSum, h2: PauliSum, sched: Schedule, plan: TrotterPlan,
                  psi0: StateVector | None = None) -> StateVector:
    """Digitized evolution of a state (default: ground state of H[u(0)])."""
    _check_pair(h1, h2)
    _, la1, V1 = _dense_eig(h1)
    _, la2, V2 = _dense_eig(h2)
    if psi0 is None:
        psi0 = ground_state(hamiltonian_at(h1, h2, sched.value(0.0)))
    _, w = _trotter_weights(sched, plan)
    if plan.order == 1:
        w1, w2 = w
        if plan.ordering == "H1_first":
            return kernels.trotter1_state(V1, la1, V2, la2, w1, w2, psi0)
        return kernels.trotter1_state(V2, la2, V1, la1, w2, w1, psi0)
    wa1, wa2, wb = w
    if plan.ordering == "H1_first":
        return kernels.trotter2_state(V1, la1, V2, la2, wa1, wa2, wb, psi0)
    return kernels.trotter2_state(V2, la2, V1, la1, wa1, wa2, wb, psi0)


def frozen_step_unitary(h1: PauliSum, h2: PauliSum, u: float, dt: float,
                        ordering: str = "H1_first") -> DenseOperator:
    """Single Trotter step with u frozen at the step start.

    exp(-i u dt H2) exp(-i (1-u) dt H1) for H1_first; the form whose
    off-diagonal adiabatic couplings vanish identically at u = 0 and u = 1.
    """
    m1, _, _ = _dense_eig(h1)
    m2, _, _ = _dense_eig(h2)
    f1 = expm_hermitian(m1, (1.0 - u) * dt)
    f2 = expm_hermitian(m2, u * dt)
    return f2 @ f1 if ordering == "H1_first" else f1 @ f2


def _richardson_pair(h1d, h2d, sched, t_end, m, psi0=None):
    grid = np.linspace(0.0, t_end, m + 1)
    mids = 0.5 * (grid[:-1] + grid[1:]) / sched.total_time
    u_mid = np.asarray(sched.ramp(mids), dtype=float)
    h = t_end / m
    if psi0 is None:
        return kernels.midpoint_product(h1d, h2d, u_mid, h)
    return kernels.midpoint_state(h1d, h2d, u_mid, h, psi0)


MAX_HALVINGS = 24


def _exact_evolve(h1: PauliSum, h2: PauliSum, sched: Schedule, t_end: float,
                  tol: float, psi0: StateVector | None):
    _check_pair(h1, h2)
    if t_end > sched.total_time * (1 + 1e-12):
        raise ValidityError("t_end exceeds the schedule's total time")
    h1d, _, _ = _dense_eig(h1)
    h2d, _, _ = _dense_eig(h2)
    if t_end == 0.0:
        return np.eye(h1d.shape[0], dtype=complex) if psi0 is None else psi0.astype(complex)
    maxn = max_hamiltonian_norm(h1, h2, sched, t_end)
    m = max(8, int(np.ceil(2.0 * t_end * max(maxn, 1e-12))))
    coarse = _richardson_pair(h1d, h2d, sched, t_end, m, psi0)
    fine = _richardson_pair(h1d, h2d, sched, t_end, 2 * m, psi0)
    extrap = (4.0 * fine - coarse) / 3.0
    for _ in range(MAX_HALVINGS):
        m *= 2
        coarse, fine = fine, _richardson_pair(h1d, h2d, sched, t_end, 2 * m, psi0)
        extrap_next = (4.0 * fine - coarse) / 3.0
        delta = extrap_next - extrap
        err = operator_norm(delta) if psi0 is None else float(np.linalg.norm(delta))
        extrap = extrap_next
        if err < tol:
            if psi0 is None:
                uu, _, vh = np.linalg.svd(extrap)
                return uu @ vh
            return extrap / np.linalg.norm(extrap)
    raise ConvergenceError(
        f"exact evolution did not reach tol={tol} within {MAX_HALVINGS} halvings")


def exact_unitary(h1: PauliSum, h2: PauliSum, sched: Schedule, t_end: float,
                  tol: float = 1e-10) -> DenseOperator:
    """Time-ordered exponential of -i H[u(t)] over [0, t_end], error-controlled."""
    return _exact_evolve(h1, h2, sched, t_end, tol, None)


def exact_state(h1: PauliSum, h2: PauliSum, sched: Schedule, t_end: float,
                tol: float = 1e-10, psi0: StateVector | None = None) -> StateVector:
    """Exactly evolved state (default initial state: ground of H[u(0)])."""
    if psi0 is None:
        psi0 = ground_state(hamiltonian_at(h1, h2, sched.value(0.0)))
    return _exact_evolve(h1, h2, sched, t_end, tol, psi0)


def infidelity(prepared: StateVector, target: StateVector) -> float:
    """1 - |<target|prepared>| (absolute overlap, not squared)."""
    prepared = np.asarray(prepared).ravel()
    target = np.asarray(target).ravel()
    if prepared.shape != target.shape:
        raise DimensionError("state dimensions differ")
    for v in (prepared, target):
        if abs(np.linalg.norm(v) - 1.0) > 1e-8:
            raise ValidityError("states must be normalized")
    return float(min(max(1.0 - abs(np.vdot(target, prepared)), 0.0), 1.0))


def ground_state(m: DenseOperator) -> StateVector:
    """Lowest eigenvector, gauge-fixed so its largest entry is real positive."""
    _, V = np.linalg.eigh(np.asarray(m, dtype=complex))
    psi = V[:, 0]
    k = int(np.argmax(np.abs(psi)))
    phase = psi[k] / abs(psi[k])
    return psi * np.conj(phase)


def ground_space_infidelity(state: StateVector, m: DenseOperator,
                            degeneracy_tol: float = 1e-9) -> float:
    """1 - ||P0 state|| with P0 the projector on the (possibly degenerate)
    lowest eigenspace of m."""
    lam, V = np.linalg.eigh(np.asarray(m, dtype=complex))
    cluster = lam <= lam[0] + degeneracy_tol
    amp = np.linalg.norm(V[:, cluster].conj().T @ np.asarray(state).ravel())
    return float(min(max(1.0 - amp, 0.0), 1.0))
