"""Grid experiments over (dt, T, fraction): infidelities, errors, bounds, fits.

One record per grid point, deterministic ordering, CSV emission at full
float precision.  Failing grid points are recorded with NaN infidelity
rather than dropped.
"""

from __future__ import annotations

import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds import BoundReport, coefficients, theorem1_infidelity_bound
from .errors import DomainError, InsufficientDataError, TrotterlabError, ValidityError
from .pauli import DENSE_QUBIT_CAP, PauliSum, operator_norm
from .propagators import (
    TrotterPlan,
    exact_state,
    exact_unitary,
    ground_state,
    hamiltonian_at,
    infidelity,
    max_hamiltonian_norm,
    trotter_state,
    trotter_unitary,
)
from .schedules import Schedule

CSV_COLUMNS = ("dt", "T", "fraction", "ordering", "infidelity", "op_norm_error",
               "lemma1_bound", "theorem1_bound", "convergent")

# dense exact references get expensive past this qubit count
OP_NORM_MAX_QUBITS = 6


@dataclass(frozen=True)
class SweepSpec:
    """Axes and conventions of one grid experiment."""

    h1: PauliSum
    h2: PauliSum
    dt_grid: tuple
    T_grid: tuple
    schedule_kind: str = "linear"
    fractions: tuple = (1.0,)
    orderings: tuple = ("H1_first",)
    order: int = 1
    target_kind: str = "instantaneous_ground"  # or "exact_evolved"
    measure_op_norm: bool | None = None  # None = auto (qubit_count <= 6)
    exact_tol: float = 1e-10
    threads: int = 1

    def __post_init__(self):
        if not self.dt_grid or not self.T_grid or not self.fractions or not self.orderings:
            raise ValidityError("all grids must be nonempty")
        if max(self.dt_grid) >= min(self.T_grid):
            raise ValidityError("every dt must lie below every T")
        if any(f <= 0 or f > 1 for f in self.fractions):
            raise ValidityError("fractions must lie in (0, 1]")
        if self.target_kind not in ("instantaneous_ground", "exact_evolved"):
            raise ValidityError(f"unknown target kind {self.target_kind!r}")
        if self.h1.qubit_count > DENSE_QUBIT_CAP:
            raise ValidityError("qubit count exceeds the dense cap")

    @property
    def wants_op_norm(self) -> bool:
        if self.measure_op_norm is None:
            return self.h1.qubit_count <= OP_NORM_MAX_QUBITS
        return self.measure_op_norm


@dataclass(frozen=True)
class SweepRecord:
    """One (dt, T, fraction, ordering) grid point."""

    dt: float
    T: float
    fraction: float
    ordering: str
    infidelity: float
    op_norm_error: float | None
    lemma1_bound: float
    theorem1_bound: float
    convergent: bool


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    prefactor: float
    r_squared: float
    window: tuple


def fit_power_law(xs, ys, window) -> PowerLawFit:
    """Least squares on (log x, log y) restricted to window = (lo, hi) on x."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    lo, hi = window
    mask = (xs >= lo) & (xs <= hi) & np.isfinite(ys)
    if mask.sum() < 4:
        raise InsufficientDataError(f"need >= 4 in-window points, have {int(mask.sum())}")
    if np.any(xs[mask] <= 0) or np.any(ys[mask] <= 0):
        raise DomainError("power-law fit needs positive data")
    lx, ly = np.log(xs[mask]), np.log(ys[mask])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return PowerLawFit(exponent=float(slope), prefactor=float(np.exp(intercept)),
                       r_squared=r2, window=(float(lo), float(hi)))


def _references(spec: SweepSpec, T: float, fraction: float):
    """Shared per-(T, fraction) objects: schedule, initial/target states, exact U."""
    sched = Schedule(spec.schedule_kind, T)
    t_end = fraction * T
    psi0 = ground_state(hamiltonian_at(spec.h1, spec.h2, sched.value(0.0)))
    if spec.target_kind == "instantaneous_ground":
        target = ground_state(hamiltonian_at(spec.h1, spec.h2, sched.value(t_end)))
    else:
        target = exact_state(spec.h1, spec.h2, sched, t_end, tol=spec.exact_tol, psi0=psi0)
    u_exact = None
    if spec.wants_op_norm:
        u_exact = exact_unitary(spec.h1, spec.h2, sched, t_end, tol=spec.exact_tol)
    max_norm = max_hamiltonian_norm(spec.h1, spec.h2, sched, t_end)
    return sched, t_end, psi0, target, u_exact, max_norm


def _one_point(spec: SweepSpec, report: BoundReport, refs, dt: float,
               fraction: float, ordering: str) -> SweepRecord:
    sched, t_end, psi0, target, u_exact, max_norm = refs
    T = sched.total_time
    convergent = dt * max_norm < math.pi
    lemma1 = report.lemma1_bound(t_end, dt)
    theorem1 = theorem1_infidelity_bound(report, t_end, dt)
    try:
        plan = TrotterPlan(dt=dt, order=spec.order, ordering=ordering, fraction=fraction)
        psi = trotter_state(spec.h1, spec.h2, sched, plan, psi0)
        infid = infidelity(psi, target)
        op_err = None
        if u_exact is not None:
            u_trot = trotter_unitary(spec.h1, spec.h2, sched, plan)
            op_err = operator_norm(u_trot - u_exact)
    except TrotterlabError:
        infid, op_err = float("nan"), None
    return SweepRecord(dt=dt, T=T, fraction=fraction, ordering=ordering,
                       infidelity=infid, op_norm_error=op_err,
                       lemma1_bound=lemma1, theorem1_bound=theorem1,
                       convergent=convergent)


def run_sweep(spec: SweepSpec, progress=None) -> list[SweepRecord]:
    """One SweepRecord per grid point, sorted by (T, dt, fraction, ordering)."""
    report = coefficients(spec.h1, spec.h2)
    tasks = []
    for T in spec.T_grid:
        for fraction in spec.fractions:
            refs = _references(spec, T, fraction)
            for dt in spec.dt_grid:
                for ordering in spec.orderings:
                    tasks.append((refs, dt, fraction, ordering))

    def work(task):
        refs, dt, fraction, ordering = task
        rec = _one_point(spec, report, refs, dt, fraction, ordering)
        if progress is not None:
            progress(rec)
        return rec

    if spec.threads > 1:
        with ThreadPoolExecutor(max_workers=spec.threads) as pool:
            records = list(pool.map(work, tasks))
    else:
        records = [work(t) for t in tasks]
    records.sort(key=lambda r: (r.T, r.dt, r.fraction, r.ordering))
    return records


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def emit_csv(records, path) -> None:
    """Write records with the fixed column schema, floats at 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for r in records:
            fh.write(",".join(_fmt(getattr(r, col)) for col in CSV_COLUMNS) + "\n")


def read_csv(path) -> list[SweepRecord]:
    """Inverse of emit_csv."""
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != ",".join(CSV_COLUMNS):
            raise ValidityError(f"unexpected sweep CSV header: {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            records.append(SweepRecord(
                dt=float(parts[0]), T=float(parts[1]), fraction=float(parts[2]),
                ordering=parts[3], infidelity=float(parts[4]),
                op_norm_error=float(parts[5]) if parts[5] else None,
                lemma1_bound=float(parts[6]), theorem1_bound=float(parts[7]),
                convergent=parts[8] == "true"))
    return records


def stderr_progress(record: SweepRecord) -> None:
    print(f"  dt={record.dt:g} T={record.T:g} f={record.fraction:g} "
          f"[{record.ordering}] infidelity={record.infidelity:.3e}"
          + ("" if record.convergent else " (non-convergent)"),
          file=sys.stderr, flush=True)
