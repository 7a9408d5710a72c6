"""Counter-diabatic-matched variable-step digitization."""

import numpy as np
import pytest

from trotterlab.errors import DegenerateGaugeError
from trotterlab.pauli import PAULI_MATS, PauliSum
from trotterlab.propagators import (
    TrotterPlan,
    ground_state,
    hamiltonian_at,
    infidelity,
    trotter_state,
)
from trotterlab.schedules import linear, smoothstep
from trotterlab.varstep import alpha_gauge, solve_step, variable_step_evolution

X = PauliSum.from_terms([(1.0, "X")])
Z = PauliSum.from_terms([(1.0, "Z")])


class TestAlphaGauge:
    def test_two_level_midpoint_value(self):
        # dense oracle: ||[H,D]||_F^2 / ||[[H,D],H]||_F^2 at u = 0.5
        xd, zd = PAULI_MATS["X"], PAULI_MATS["Z"]
        h = 0.5 * xd + 0.5 * zd
        d = zd - xd
        c1 = h @ d - d @ h
        c2 = c1 @ h - h @ c1
        oracle = np.sum(np.abs(c1) ** 2) / np.sum(np.abs(c2) ** 2)
        got = alpha_gauge(X, Z, linear(100.0), 50.0)
        assert got == pytest.approx(oracle, rel=1e-12)
        # the two-level variational value coincides with the exact gauge
        # potential A = Y at the avoided crossing, i.e. alpha = 1/2
        assert got == pytest.approx(0.5, abs=1e-12)

    def test_positive(self):
        # positivity is required for a positive matched step length; the
        # sign convention folds the ramp direction into the step formula
        for t in (5.0, 50.0, 95.0):
            assert alpha_gauge(X, Z, linear(100.0), t) > 0

    def test_ramp_speed_invariance(self):
        # alpha depends on u only: compare schedules at times with equal u
        a_lin = alpha_gauge(X, Z, linear(100.0), 30.0)   # u = 0.3
        s = smoothstep(100.0)
        # find t with s(t/T) = 0.3
        from scipy.optimize import brentq
        t_eq = brentq(lambda t: s.value(t) - 0.3, 0.0, 100.0)
        assert alpha_gauge(X, Z, s, t_eq) == pytest.approx(a_lin, rel=1e-9)

    def test_commuting_pair_degenerate(self):
        h1 = PauliSum.from_terms([(1.0, "ZI")])
        h2 = PauliSum.from_terms([(1.0, "ZZ")])
        with pytest.raises(DegenerateGaugeError):
            alpha_gauge(h1, h2, linear(10.0), 5.0)


class TestSolveStep:
    def test_long_step_contracts(self):
        rec = solve_step(X, Z, linear(100.0), 50.0, 0.5)
        assert 0 < rec.tau < 0.5
        # matched value 2*udot*alpha/(gamma_bar*beta_bar) ~= 0.04 at u=0.5
        assert rec.tau == pytest.approx(0.04, rel=0.05)

    def test_short_step_expands(self):
        rec = solve_step(X, Z, linear(100.0), 50.0, 0.01)
        assert rec.tau > 0.01

    def test_reduction_weights(self):
        # forcing tau = dt makes the applied weights the standard ones
        psi_v, plan = variable_step_evolution(X, Z, linear(100.0), 100.0, 0.25,
                                              force_standard_tau=True)
        for rec in plan.per_step[:-1]:
            assert rec.tau == pytest.approx(0.25, abs=1e-12)
            si = linear(100.0).step_integrals(rec.t, rec.t + rec.tau)
            assert rec.gamma_j == pytest.approx(si.w1 / 0.25, abs=1e-12)
            assert rec.beta_j == pytest.approx(si.w2 / 0.25, abs=1e-12)

    def test_sbar_direct_substitution(self):
        # commuting pair falls back to standard steps: at mid-ramp
        # gamma_bar = beta_bar = 1/2, so s_bar = -(1/4) dt/2 = -0.0125
        h1 = PauliSum.from_terms([(1.0, "ZI")])
        h2 = PauliSum.from_terms([(1.0, "ZZ")])
        _, plan = variable_step_evolution(h1, h2, linear(10.0), 10.0, 0.1)
        mid = plan.per_step[len(plan.per_step) // 2]
        assert mid.s_bar == pytest.approx(-0.0125, rel=1e-3)


class TestVariableStepEvolution:
    def test_reduction_identity(self):
        for dt in (0.1, 0.3):
            psi_v, _ = variable_step_evolution(X, Z, linear(100.0), 100.0, dt,
                                               force_standard_tau=True)
            psi_s = trotter_state(X, Z, linear(100.0), TrotterPlan(dt=dt))
            assert np.abs(psi_v - psi_s).max() < 1e-12

    def test_commuting_pair_matches_standard(self):
        h1 = PauliSum.from_terms([(1.0, "ZI")])
        h2 = PauliSum.from_terms([(1.0, "ZZ")])
        psi_v, _ = variable_step_evolution(h1, h2, linear(20.0), 20.0, 0.4)
        psi_s = trotter_state(h1, h2, linear(20.0), TrotterPlan(dt=0.4))
        assert np.abs(psi_v - psi_s).max() < 1e-12

    def test_infidelity_improves_at_moderate_steps(self):
        T, frac = 100.0, 0.9
        sched = linear(T)
        target = ground_state(hamiltonian_at(X, Z, 0.9))
        for dt in (0.2, 0.5, 1.0):
            std = infidelity(
                trotter_state(X, Z, sched, TrotterPlan(dt=dt, fraction=frac)), target)
            psi_v, _ = variable_step_evolution(X, Z, sched, frac * T, dt)
            assert infidelity(psi_v, target) <= std

    def test_taus_sum_to_total(self):
        _, plan = variable_step_evolution(X, Z, linear(50.0), 45.0, 0.3)
        assert plan.total_time == pytest.approx(45.0, abs=1e-9)
        assert all(rec.tau > 0 for rec in plan.per_step)

    def test_plan_csv(self, tmp_path):
        _, plan = variable_step_evolution(X, Z, linear(10.0), 10.0, 0.5)
        path = tmp_path / "plan.csv"
        plan.write_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "k,t,tau,gamma_j,beta_j,s_bar,alpha_bar"
        assert len(lines) == len(plan.per_step) + 1

    def test_state_normalized(self):
        psi_v, _ = variable_step_evolution(X, Z, linear(30.0), 30.0, 0.2)
        assert abs(np.linalg.norm(psi_v) - 1.0) < 1e-10
