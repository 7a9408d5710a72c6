"""trotterlab command line: presets, sweeps, bounds, diagnostics,
population traces, variable-step comparisons, the QAOA pipeline.

Every file-producing run writes a manifest (resolved configuration,
package and library versions, wall time) beside its outputs, so a data
file can always be traced back to the exact invocation.  Exit codes:
0 success, 2 usage/validation, 3 numeric or convergence failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .errors import (
    ConstructionError,
    ConvergenceError,
    DomainError,
    InsufficientDataError,
    LookupError_,
    OptimizationError,
    TrotterlabError,
    ValidityError,
)

USAGE_ERRORS = (ValidityError, DomainError, ConstructionError, LookupError_,
                InsufficientDataError)
NUMERIC_ERRORS = (ConvergenceError, OptimizationError)


def parse_grid(spec: str) -> tuple:
    """Grid spec: 'log:lo:hi:n', 'lin:lo:hi:n', or a comma list."""
    if spec.startswith("log:") or spec.startswith("lin:"):
        kind, lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
        if n < 1 or hi <= lo:
            raise ValidityError(f"bad grid spec {spec!r}")
        fn = np.geomspace if kind == "log" else np.linspace
        return tuple(float(v) for v in fn(lo, hi, n))
    try:
        return tuple(float(v) for v in spec.split(","))
    except ValueError as exc:
        raise ValidityError(f"bad grid spec {spec!r}") from exc


def _load_pair(args):
    from .pauli import pauli_sum_from_file
    from .presets import get_preset
    if getattr(args, "hamiltonian", None):
        h2 = pauli_sum_from_file(args.hamiltonian)
        if getattr(args, "mixer", None):
            h1 = pauli_sum_from_file(args.mixer)
        else:
            from .presets import _uniform_x
            h1 = _uniform_x(h2.qubit_count)
        return h1, h2, 100.0
    preset = get_preset(args.preset)
    return preset.h1, preset.h2, preset.default_T


def write_manifest(path, command: str, config: dict, wall_time: float) -> None:
    import scipy
    payload = {
        "command": command,
        "config": config,
        "versions": {"trotterlab": __version__, "numpy": np.__version__,
                     "scipy": scipy.__version__, "python": sys.version.split()[0]},
        "wall_time_s": wall_time,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_presets(args) -> int:
    from .presets import PRESETS, describe, get_preset
    if args.action == "list":
        for name in sorted(PRESETS):
            p = PRESETS[name]
            print(f"{name:12s} {p.h1.qubit_count} qubits  {p.notes}")
        return 0
    print(describe(get_preset(args.name)))
    return 0


def cmd_sweep(args) -> int:
    from .sweeps import SweepSpec, emit_csv, fit_power_law, run_sweep, stderr_progress
    h1, h2, default_T = _load_pair(args)
    dt_grid = parse_grid(args.dt_grid)
    t_grid = parse_grid(args.T_grid) if args.T_grid else (default_T,)
    fractions = tuple(float(f) for f in args.fraction.split(","))
    spec = SweepSpec(
        h1=h1, h2=h2, dt_grid=dt_grid, T_grid=t_grid,
        schedule_kind=args.schedule, fractions=fractions,
        orderings=tuple(args.ordering.split(",")), order=args.order,
        target_kind=args.target,
        measure_op_norm={"auto": None, "on": True, "off": False}[args.op_norm],
        exact_tol=args.exact_tol, threads=args.threads)
    n_points = len(dt_grid) * len(t_grid) * len(fractions) * len(spec.orderings)
    if args.dry_run:
        print(f"grid: {len(dt_grid)} dt x {len(t_grid)} T x {len(fractions)} fractions"
              f" x {len(spec.orderings)} orderings = {n_points} points")
        return 0
    start = time.time()
    records = run_sweep(spec, progress=stderr_progress if args.verbose else None)
    emit_csv(records, args.out)
    lo, hi = (float(x) for x in args.fit_window.split(":"))
    for T in t_grid:
        for frac in fractions:
            for ordering in spec.orderings:
                pts = [r for r in records
                       if r.T == T and r.fraction == frac and r.ordering == ordering
                       and r.convergent and np.isfinite(r.infidelity)]
                if len([r for r in pts if lo <= r.dt <= hi]) >= 4:
                    fit = fit_power_law([r.dt for r in pts],
                                        [r.infidelity for r in pts], (lo, hi))
                    print(f"T={T:g} fraction={frac:g} [{ordering}] dt-window "
                          f"[{lo:g}, {hi:g}]: exponent {fit.exponent:+.3f} "
                          f"(r^2 {fit.r_squared:.4f})")
    write_manifest(args.out + ".manifest.json", "sweep", _config(args),
                   time.time() - start)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def cmd_bounds(args) -> int:
    from .bounds import coefficients, lemma_bounds, theorem1_infidelity_bound
    h1, h2, default_T = _load_pair(args)
    report = coefficients(h1, h2)
    sys.stdout.write(report.to_text())
    T = args.T if args.T is not None else default_T
    if args.dt is not None:
        first, second = lemma_bounds(report, T, args.dt)
        print(f"lemma1_first_order(T={T:g}, dt={args.dt:g}) = {first:.6g}")
        print(f"lemma3_second_order(T={T:g}, dt={args.dt:g}) = {second:.6g}")
        print(f"theorem1_bound(T={T:g}, dt={args.dt:g}) = "
              f"{theorem1_infidelity_bound(report, T, args.dt):.6g}")
    return 0


def cmd_population(args) -> int:
    from .propagators import TrotterPlan
    from .schedules import Schedule
    from .spectral import population_trace
    h1, h2, default_T = _load_pair(args)
    T = args.T if args.T is not None else default_T
    sched = Schedule(args.schedule, T)
    plan = TrotterPlan(dt=args.dt, order=args.order, fraction=args.fraction)
    start = time.time()
    trace = population_trace(h1, h2, sched, plan)
    trace.write_csv(args.out)
    write_manifest(args.out + ".manifest.json", "population", _config(args),
                   time.time() - start)
    deficit = trace.ground_deficit()
    print(f"wrote {len(trace.times)} samples to {args.out}")
    print(f"max ground-state deficit {deficit.max():.6g} at "
          f"u={trace.u_values[int(np.argmax(deficit))]:.4f}; final {deficit[-1]:.6g}")
    return 0


def cmd_diagnostics(args) -> int:
    from .schedules import Schedule
    from .spectral import coupling_diagnostics
    h1, h2, default_T = _load_pair(args)
    T = args.T if args.T is not None else default_T
    sched = Schedule(args.schedule, T)
    for t in (float(x) for x in args.times.split(",")):
        r_mat, s_mat, q_mat = coupling_diagnostics(h1, h2, sched, T, args.dt, t)
        print(f"t={t:g} (u={sched.value(min(t, T)):.4f}): "
              f"max|R|={np.abs(r_mat).max():.6g} max|S|={np.abs(s_mat).max():.6g} "
              f"max|Q|={np.abs(q_mat).max():.6g}")
    return 0


def cmd_variable_step(args) -> int:
    from .propagators import (TrotterPlan, ground_state, hamiltonian_at, infidelity,
                              max_hamiltonian_norm, trotter_state)
    from .schedules import Schedule
    from .varstep import variable_step_evolution
    h1, h2, default_T = _load_pair(args)
    T = args.T if args.T is not None else default_T
    sched = Schedule(args.schedule, T)
    t_end = args.fraction * T
    target = ground_state(hamiltonian_at(h1, h2, sched.value(t_end)))
    max_norm = max_hamiltonian_norm(h1, h2, sched, t_end)
    start = time.time()
    rows = []
    for dt in parse_grid(args.dt_grid):
        plan_obj = TrotterPlan(dt=dt, fraction=args.fraction)
        psi_std = trotter_state(h1, h2, sched, plan_obj)
        psi_var, plan = variable_step_evolution(h1, h2, sched, t_end, dt)
        rows.append((dt, infidelity(psi_std, target), infidelity(psi_var, target),
                     len(plan.per_step), dt * max_norm < np.pi))
        if args.plan_out and dt == parse_grid(args.dt_grid)[-1]:
            plan.write_csv(args.plan_out)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write("dt,T,fraction,infid_standard,infid_variable,steps_variable,convergent\n")
        for dt, s, v, ns, conv in rows:
            fh.write(f"{dt:.17g},{T:.17g},{args.fraction:.17g},{s:.17g},{v:.17g},"
                     f"{ns},{'true' if conv else 'false'}\n")
    write_manifest(args.out + ".manifest.json", "variable-step", _config(args),
                   time.time() - start)
    wins = sum(1 for _, s, v, _, conv in rows if conv and v <= s)
    conv_count = sum(1 for r in rows if r[4])
    print(f"variable <= standard at {wins}/{conv_count} convergent grid points")
    return 0


def cmd_qaoa_pipeline(args) -> int:
    from .qaoa import run_correspondence_pipeline
    if args.p_min > args.p_max:
        raise ValidityError("p-min must not exceed p-max")
    os.makedirs(args.out_dir, exist_ok=True)
    start = time.time()

    def progress(row):
        print(f"P={row.P}: T={row.T_total:.3f} J_qaoa={row.J_qaoa:.6f} "
              f"infid_trotterized={row.infid_trotterized:.4e}", file=sys.stderr,
              flush=True)

    rows = run_correspondence_pipeline(
        args.n, args.regularity, args.p_min, args.p_max,
        out_dir=args.out_dir, fine_dt=args.fine_dt, restarts=args.restarts,
        progress=progress)
    write_manifest(os.path.join(args.out_dir, "summary.csv.manifest.json"),
                   "qaoa-pipeline", _config(args), time.time() - start)
    print(f"wrote per-P artifacts and summary.csv under {args.out_dir}")
    return 0 if rows else 3


def cmd_step_counts(args) -> int:
    from .bounds import step_counts
    r, rp = step_counts(args.epsilon, args.p)
    print(f"self-healing digitization: r ~ {r:.6g}")
    print(f"generic order-{args.p} bound: r' ~ {rp:.6g}")
    print(f"ratio r'/r = {rp / r:.6g} (= epsilon^(-1/{args.p}))")
    return 0


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items())
            if k not in ("func", "config") and v is not None}


def _apply_config_file(parser, argv):
    """KEY = VALUE lines become parser defaults, flags still win."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        path = argv[idx + 1]
    except IndexError:
        raise ValidityError("--config needs a file path") from None
    defaults = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValidityError(f"bad config line {raw!r}")
            key, value = (p.strip() for p in line.split("=", 1))
            defaults[key.replace("-", "_")] = value
    parser.set_defaults(**defaults)
    # subcommand parsers re-apply their own defaults, so push the config
    # into each of them too (string defaults get type-converted by argparse)
    for sub in parser._trotterlab_subparsers:
        known = {a.dest for a in sub._actions}
        sub.set_defaults(**{k: v for k, v in defaults.items() if k in known})
    return argv[:idx] + argv[idx + 2:]




def _track(sub, parent):
    class _Recorder:
        def add_parser(self, *args, **kwargs):
            sp = sub.add_parser(*args, **kwargs)
            parent._trotterlab_subparsers.append(sp)
            return sp
    return _Recorder()

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trotterlab",
        description="Digitized adiabatic state preparation experiments")
    parser.add_argument("--config", help="key = value file of flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)
    parser._trotterlab_subparsers = []

    p = _track(sub, parser).add_parser("presets", help="list or show built-in Hamiltonian pairs")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_presets)

    def add_system_args(sp, with_T=True):
        sp.add_argument("--preset", default="two-level")
        sp.add_argument("--hamiltonian", help="H2 from a Pauli text file")
        sp.add_argument("--mixer", help="H1 from a Pauli text file "
                                        "(default: uniform X mixer)")
        sp.add_argument("--schedule", default="linear",
                        choices=["linear", "smoothstep"])
        if with_T:
            sp.add_argument("--T", type=float, default=None)

    p = _track(sub, parser).add_parser("sweep", help="grid experiment over (dt, T, fraction)")
    add_system_args(p, with_T=False)
    p.add_argument("--dt-grid", required=True, help="log:lo:hi:n | lin:... | a,b,c")
    p.add_argument("--T-grid", default=None)
    p.add_argument("--fraction", default="1.0", help="comma list of ramp fractions")
    p.add_argument("--ordering", default="H1_first")
    p.add_argument("--order", type=int, default=1, choices=[1, 2])
    p.add_argument("--target", default="instantaneous_ground",
                   choices=["instantaneous_ground", "exact_evolved"])
    p.add_argument("--op-norm", default="auto", choices=["auto", "on", "off"])
    p.add_argument("--exact-tol", type=float, default=1e-10)
    p.add_argument("--fit-window", default="0.05:0.5")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", required=True)
    p.add_argument("--dry-run", action="store_true")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = _track(sub, parser).add_parser("bounds", help="coefficients and closed-form bounds")
    add_system_args(p)
    p.add_argument("--dt", type=float, default=None)
    p.set_defaults(func=cmd_bounds)

    p = _track(sub, parser).add_parser("population", help="adiabatic-basis population trace")
    add_system_args(p)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--fraction", type=float, default=1.0)
    p.add_argument("--order", type=int, default=1, choices=[1, 2])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_population)

    p = _track(sub, parser).add_parser("diagnostics", help="step-unitary couplings R, S, Q")
    add_system_args(p)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--times", required=True, help="comma list of times")
    p.set_defaults(func=cmd_diagnostics)

    p = _track(sub, parser).add_parser("variable-step", help="matched variable-step comparison")
    add_system_args(p)
    p.add_argument("--dt-grid", required=True)
    p.add_argument("--fraction", type=float, default=0.9)
    p.add_argument("--out", required=True)
    p.add_argument("--plan-out", default=None)
    p.set_defaults(func=cmd_variable_step)

    p = _track(sub, parser).add_parser("qaoa-pipeline", help="QAOA/annealing correspondence ladder")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--regularity", type=int, required=True, choices=[2, 3])
    p.add_argument("--p-min", type=int, required=True)
    p.add_argument("--p-max", type=int, required=True)
    p.add_argument("--fine-dt", type=float, default=0.01)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_qaoa_pipeline)

    p = _track(sub, parser).add_parser("step-counts", help="step-count scaling comparison")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_step_counts)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except TrotterlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
