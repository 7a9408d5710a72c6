"""Ramp functions u(t) = s(t/T) and exact per-step integrals.

Every Trotter factor is weighted by the integrals of 1-u and u over its
step, so these are computed from closed-form antiderivatives (linear,
smoothstep) or the piecewise-polynomial antiderivative of the monotone
cubic interpolant (tabulated), exact to well below the 1e-12 contract.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, ValidityError

RAMP_KINDS = ("linear", "smoothstep", "tabulated")


@dataclass(frozen=True)
class StepIntegrals:
    """w1 = integral of 1-u over the step, w2 = integral of u."""

    w1: float
    w2: float


@dataclass(frozen=True)
class Schedule:
    """A ramp s: [0,1] -> [0,1] together with the total time T."""

    ramp_kind: str
    total_time: float
    table: tuple | None = None  # ((t_norm, ...), (u, ...)) knots for "tabulated"
    _interp: PchipInterpolator | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.ramp_kind not in RAMP_KINDS:
            raise ValidityError(f"unknown ramp kind {self.ramp_kind!r}")
        if self.total_time <= 0:
            raise ValidityError("total_time must be positive")
        if self.ramp_kind == "tabulated":
            if self.table is None:
                raise ValidityError("tabulated ramp requires knots")
            xs = np.asarray(self.table[0], dtype=float)
            ys = np.asarray(self.table[1], dtype=float)
            if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
                raise ValidityError("knots must be two equal-length vectors (>= 2 points)")
            if np.any(np.diff(xs) <= 0):
                raise ValidityError("knot times must be strictly increasing")
            if xs[0] != 0.0 or xs[-1] != 1.0:
                raise ValidityError("knot times must span [0, 1]")
            if ys.min() < 0.0 or ys.max() > 1.0:
                raise ValidityError("knot values must lie in [0, 1]")
            object.__setattr__(self, "table", (tuple(xs), tuple(ys)))
            object.__setattr__(self, "_interp", PchipInterpolator(xs, ys))
        elif self.table is not None:
            raise ValidityError("knots are only valid for the tabulated kind")

    def ramp(self, x):
        """s(x) for normalized time x in [0,1] (vectorized)."""
        x = np.asarray(x, dtype=float)
        if self.ramp_kind == "linear":
            out = x
        elif self.ramp_kind == "smoothstep":
            out = 3.0 * x**2 - 2.0 * x**3
        else:
            # PCHIP never overshoots its data range; clamp guards rounding.
            out = np.clip(self._interp(x), 0.0, 1.0)
        return out if out.ndim else float(out)

    def value(self, t: float) -> float:
        """u(t) = s(t/T)."""
        self._check_time(t)
        return float(self.ramp(t / self.total_time))

    def derivative(self, t: float) -> float:
        """du/dt at t."""
        self._check_time(t)
        T = self.total_time
        x = t / T
        if self.ramp_kind == "linear":
            return 1.0 / T
        if self.ramp_kind == "smoothstep":
            return (6.0 * x - 6.0 * x**2) / T
        return float(self._interp.derivative()(x)) / T

    def _ramp_antiderivative(self, x: float) -> float:
        """Integral of s from 0 to x, in normalized time."""
        if self.ramp_kind == "linear":
            return 0.5 * x * x
        if self.ramp_kind == "smoothstep":
            return x**3 - 0.5 * x**4
        return float(self._interp.antiderivative()(x))

    def step_integrals(self, t_start: float, t_end: float) -> StepIntegrals:
        """Exact (w1, w2) over [t_start, t_end]; w1 + w2 = step length."""
        self._check_time(t_start)
        self._check_time(t_end)
        if not t_start < t_end:
            raise DomainError(f"reversed or empty interval [{t_start}, {t_end}]")
        T = self.total_time
        w2 = T * (self._ramp_antiderivative(t_end / T) - self._ramp_antiderivative(t_start / T))
        return StepIntegrals(w1=(t_end - t_start) - w2, w2=w2)

    def _check_time(self, t: float):
        # tiny slack for accumulated float step boundaries
        if t < -1e-12 or t > self.total_time * (1 + 1e-12):
            raise DomainError(f"time {t} outside [0, {self.total_time}]")


def linear(total_time: float) -> Schedule:
    return Schedule("linear", total_time)


def smoothstep(total_time: float) -> Schedule:
    return Schedule("smoothstep", total_time)


def tabulated(total_time: float, t_norm, u) -> Schedule:
    return Schedule("tabulated", total_time, table=(tuple(t_norm), tuple(u)))


def write_ramp_csv(path, sched_or_table) -> None:
    """Write a tabulated ramp as CSV with header ``t_norm,u``."""
    if isinstance(sched_or_table, Schedule):
        if sched_or_table.ramp_kind != "tabulated":
            raise ValidityError("only tabulated ramps serialize to CSV")
        xs, ys = sched_or_table.table
    else:
        xs, ys = sched_or_table
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("t_norm,u\n")
        for x, y in zip(xs, ys):
            fh.write(f"{x:.17g},{y:.17g}\n")


def read_ramp_csv(path, total_time: float) -> Schedule:
    """Read a tabulated ramp from CSV written by write_ramp_csv."""
    with open(path, "r", encoding="utf-8") as fh:
        return _parse_ramp_csv(fh, total_time)


def _parse_ramp_csv(fh: io.TextIOBase, total_time: float) -> Schedule:
    header = fh.readline().strip()
    if header != "t_norm,u":
        raise ValidityError(f"expected header 't_norm,u', got {header!r}")
    xs, ys = [], []
    for raw in fh:
        line = raw.strip()
        if not line:
            continue
        a, b = line.split(",")
        xs.append(float(a))
        ys.append(float(b))
    return tabulated(total_time, xs, ys)
