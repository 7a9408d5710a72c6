"""Variable-time-step Trotterization matched to the leading gauge potential.

The intrinsic cross term of a first-order Trotter step acts as a
counter-diabatic generator proportional to [H1, H2].  Matching its
strength per unit time to the variational leading-order gauge potential
fixes a step length

    tau(t) = 2 * du/dt * alpha(u) / (gamma_bar * beta_bar),

with alpha(u) = ||[H, H2-H1]||_F^2 / ||[[H, H2-H1], H]||_F^2 evaluated on
H = H[u].  The evolution then applies ordinary first-order factors with
exact step integrals on the resulting non-uniform grid; forcing tau to
the nominal dt reproduces standard Trotterization identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DegenerateGaugeError, ValidityError
from .pauli import PauliSum, to_dense
from .propagators import StateVector, _dense_eig, ground_state, hamiltonian_at
from .schedules import Schedule

GAUGE_DENOMINATOR_TOL = 1e-24
ENDPOINT_PRODUCT_TOL = 1e-8
TAU_FIXED_POINT_TOL = 1e-10
TAU_MAX_ITER = 100


@dataclass(frozen=True)
class StepRecord:
    """One variable-length step and its matching diagnostics."""

    k: int
    t: float
    tau: float
    gamma_j: float
    beta_j: float
    s_bar: float
    alpha_bar: float


@dataclass(frozen=True)
class VariableStepPlan:
    dt_nominal: float
    per_step: tuple

    @property
    def total_time(self) -> float:
        return float(sum(s.tau for s in self.per_step))

    def tau_ratios(self) -> np.ndarray:
        """Solved tau / nominal dt per step."""
        return np.array([s.tau / self.dt_nominal for s in self.per_step])

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("k,t,tau,gamma_j,beta_j,s_bar,alpha_bar\n")
            for s in self.per_step:
                fh.write(f"{s.k},{s.t:.17g},{s.tau:.17g},{s.gamma_j:.17g},"
                         f"{s.beta_j:.17g},{s.s_bar:.17g},{s.alpha_bar:.17g}\n")


def _alpha_from_dense(h_mat: np.ndarray, diff: np.ndarray) -> float:
    c1 = h_mat @ diff - diff @ h_mat
    num = float(np.sum(np.abs(c1) ** 2))
    c2 = c1 @ h_mat - h_mat @ c1  # [[H, D], H]
    den = float(np.sum(np.abs(c2) ** 2))
    if den < GAUGE_DENOMINATOR_TOL:
        raise DegenerateGaugeError("gauge-potential denominator vanished")
    return num / den


def alpha_gauge(h1: PauliSum, h2: PauliSum, sched: Schedule, t: float) -> float:
    """Leading-order gauge-potential coefficient at u(t).

    Frobenius norms with the identity projector; the d/dt factor of the
    Hamiltonian derivative cancels between numerator and denominator, so
    the value is invariant under rescaling the ramp speed.
    """
    u = sched.value(t)
    h_mat = hamiltonian_at(h1, h2, u)
    diff = to_dense(h2) - to_dense(h1)
    return _alpha_from_dense(h_mat, diff)


@lru_cache(maxsize=16)
def _alpha_table(h1: PauliSum, h2: PauliSum, n_grid: int = 2049):
    """alpha(u) tabulated on [-0.05, 1.05] for interpolation during stepping."""
    us = np.linspace(-0.05, 1.05, n_grid)
    diff = to_dense(h2) - to_dense(h1)
    m1, _, _ = _dense_eig(h1)
    m2, _, _ = _dense_eig(h2)
    vals = np.empty(n_grid)
    for i, u in enumerate(us):
        vals[i] = _alpha_from_dense((1.0 - u) * m1 + u * m2, diff)
    return us, vals


def solve_step(h1: PauliSum, h2: PauliSum, sched: Schedule, t: float, dt: float,
               tau_max: float | None = None, alpha_fn=None, k: int = 0) -> StepRecord:
    """Self-consistent matched step at time t for nominal step dt.

    Interval averages (gamma_bar, beta_bar, du/dt) are taken over
    [t, t + tau] and re-evaluated until tau converges; alpha is evaluated
    at the interval midpoint.  Near the ramp endpoints, where the
    gamma_bar*beta_bar product vanishes, the step falls back to the
    standard length.
    """
    if alpha_fn is None:
        us, vals = _alpha_table(h1, h2)

        def alpha_fn(u):
            return float(np.interp(u, us, vals))

    remaining = sched.total_time - t if tau_max is None else tau_max
    if remaining <= 0:
        raise ValidityError("no time left for a step")

    def averages(tau):
        si = sched.step_integrals(t, t + tau)
        gamma_bar = si.w1 / tau
        beta_bar = si.w2 / tau
        udot = (sched.ramp((t + tau) / sched.total_time)
                - sched.ramp(t / sched.total_time)) / tau
        alpha_bar = alpha_fn(sched.ramp((t + 0.5 * tau) / sched.total_time))
        return gamma_bar, beta_bar, udot, alpha_bar

    lo, hi = 1e-3 * dt, remaining

    def damped_map(tau):
        gamma_bar, beta_bar, udot, alpha_bar = averages(tau)
        if gamma_bar * beta_bar < ENDPOINT_PRODUCT_TOL:
            return None
        target = 2.0 * udot * alpha_bar / (gamma_bar * beta_bar)
        return 0.5 * tau + 0.5 * min(max(target, lo), hi)

    tau = min(dt, remaining)
    fallback = damped_map(tau) is None
    if not fallback:
        # Steffensen-accelerated damped iteration; the plain damped map can
        # contract as slowly as ~0.85 per step near the ramp tail
        converged = False
        for _ in range(TAU_MAX_ITER // 3):
            b = damped_map(tau)
            if b is None:
                fallback = True
                break
            if abs(b - tau) < TAU_FIXED_POINT_TOL:
                tau = b
                converged = True
                break
            c = damped_map(b)
            if c is None:
                fallback = True
                break
            denom = (c - b) - (b - tau)
            accel = c if abs(denom) < 1e-300 else c - (c - b) ** 2 / denom
            tau = min(max(accel, lo), hi)
        if not fallback and not converged:
            raise ConvergenceError(f"tau fixed point did not converge at t={t}")
    if fallback:
        tau = min(dt, remaining)
    gamma_bar, beta_bar, udot, alpha_bar = averages(tau)

    s_bar = -gamma_bar * beta_bar * dt**2 / (2.0 * tau) + udot * alpha_bar
    return StepRecord(k=k, t=t, tau=tau,
                      gamma_j=gamma_bar * tau / dt, beta_j=beta_bar * tau / dt,
                      s_bar=s_bar, alpha_bar=alpha_bar)


def variable_step_evolution(h1: PauliSum, h2: PauliSum, sched: Schedule,
                            t_end: float, dt: float,
                            psi0: StateVector | None = None,
                            force_standard_tau: bool = False,
                            ordering: str = "H1_first",
                            ) -> tuple[StateVector, VariableStepPlan]:
    """Evolve a state on the matched non-uniform step grid.

    Each step applies exp(-i*w2*H2) exp(-i*w1*H1) (H1 first) with the
    exact integrals over [t, t+tau]; forcing tau = dt reproduces standard
    first-order Trotterization bit for bit.  A commuting Hamiltonian pair
    has no cross term to match, so it also falls back to standard steps.
    """
    if t_end > sched.total_time * (1 + 1e-12):
        raise ValidityError("t_end exceeds the schedule's total time")
    _, la1, V1 = _dense_eig(h1)
    _, la2, V2 = _dense_eig(h2)
    if psi0 is None:
        psi0 = ground_state(hamiltonian_at(h1, h2, sched.value(0.0)))

    commuting = False
    if not force_standard_tau:
        m1, _, _ = _dense_eig(h1)
        m2, _, _ = _dense_eig(h2)
        commuting = np.abs(m1 @ m2 - m2 @ m1).max() < 1e-12
    standard = force_standard_tau or commuting

    us = vals = None
    if not standard:
        us, vals = _alpha_table(h1, h2)

    def alpha_fn(u):
        return float(np.interp(u, us, vals))

    records = []
    w1_list, w2_list = [], []
    if standard:
        # exactly the uniform plan grid, so forcing tau reproduces
        # trotter_state bit for bit
        from .propagators import TrotterPlan
        edges = TrotterPlan(dt=dt, fraction=t_end / sched.total_time).step_edges(
            sched.total_time)
        for k in range(len(edges) - 1):
            t, tau = edges[k], edges[k + 1] - edges[k]
            si = sched.step_integrals(t, t + tau)
            gb, bb = si.w1 / tau, si.w2 / tau
            records.append(StepRecord(
                k=k, t=t, tau=tau, gamma_j=gb * tau / dt, beta_j=bb * tau / dt,
                s_bar=-gb * bb * dt**2 / (2.0 * tau), alpha_bar=0.0))
            w1_list.append(si.w1)
            w2_list.append(si.w2)
    else:
        max_steps = int(np.ceil(t_end / (1e-3 * dt))) + 2
        t = 0.0
        k = 0
        while t < t_end * (1 - 1e-12):
            rec = solve_step(h1, h2, sched, t, dt, tau_max=t_end - t,
                             alpha_fn=alpha_fn, k=k)
            records.append(rec)
            si = sched.step_integrals(t, t + rec.tau)
            w1_list.append(si.w1)
            w2_list.append(si.w2)
            t += rec.tau
            k += 1
            if k > max_steps:
                raise ConvergenceError("variable-step grid did not reach t_end")

    from . import kernels
    w1_arr = np.asarray(w1_list)
    w2_arr = np.asarray(w2_list)
    if ordering == "H1_first":
        psi = kernels.trotter1_state(V1, la1, V2, la2, w1_arr, w2_arr, psi0)
    else:
        psi = kernels.trotter1_state(V2, la2, V1, la1, w2_arr, w1_arr, psi0)
    return psi, VariableStepPlan(dt_nominal=dt, per_step=tuple(records))
