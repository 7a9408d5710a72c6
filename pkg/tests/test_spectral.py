"""Eigenframe gauges, adiabatic populations, coupling diagnostics."""

import numpy as np
import pytest

from trotterlab.pauli import PauliSum
from trotterlab.propagators import TrotterPlan
from trotterlab.schedules import linear
from trotterlab.spectral import coupling_diagnostics, eigenframe_path, population_trace
from trotterlab.sweeps import fit_power_law

X = PauliSum.from_terms([(1.0, "X")])
Z = PauliSum.from_terms([(1.0, "Z")])


class TestEigenframes:
    def test_two_level_midpoint_energies(self):
        # closed form: eigenvalues of (1-u)X + uZ are +/- sqrt((1-u)^2 + u^2)
        (frame,) = eigenframe_path(X, Z, [0.5])
        np.testing.assert_allclose(frame.energies, [-1 / np.sqrt(2), 1 / np.sqrt(2)],
                                   atol=1e-12)

    def test_two_level_minimum_gap(self):
        us = np.linspace(0.0, 1.0, 401)
        frames = eigenframe_path(X, Z, us)
        gaps = np.array([f.gaps[0] for f in frames])
        oracle = 2.0 * np.sqrt((1 - us) ** 2 + us**2)
        np.testing.assert_allclose(gaps, oracle, atol=1e-12)
        assert gaps.min() == pytest.approx(np.sqrt(2.0), abs=1e-9)
        assert us[np.argmin(gaps)] == pytest.approx(0.5, abs=2e-3)

    def test_ground_state_at_zero(self):
        (frame,) = eigenframe_path(X, Z, [0.0])
        minus = np.array([1.0, -1.0]) / np.sqrt(2)
        assert abs(abs(np.vdot(minus, frame.vectors[:, 0])) - 1.0) < 1e-12

    def test_gauge_continuity(self):
        frames = eigenframe_path(X, Z, np.linspace(0, 1, 101))
        for a, b in zip(frames[:-1], frames[1:]):
            for i in range(2):
                z = np.vdot(a.vectors[:, i], b.vectors[:, i])
                assert abs(z.imag) < 1e-12 and z.real >= 0

    def test_eigen_residual(self):
        from trotterlab.propagators import hamiltonian_at
        frames = eigenframe_path(X, Z, [0.3])
        h = hamiltonian_at(X, Z, 0.3)
        f = frames[0]
        resid = h @ f.vectors - f.vectors * f.energies
        assert np.abs(resid).max() < 1e-10

    def test_degenerate_cluster_alignment(self):
        # two uncoupled qubits: the middle eigenvalue pair is exactly
        # degenerate for every u, so only subspace alignment keeps the
        # frame-to-frame vectors continuous
        h1 = PauliSum.from_terms([(1.0, "XI"), (1.0, "IX")])
        h2 = PauliSum.from_terms([(1.0, "ZI"), (1.0, "IZ")])
        frames = eigenframe_path(h1, h2, np.linspace(0.0, 1.0, 51))
        assert all(f.gaps[1] < 1e-12 for f in frames)
        for a, b in zip(frames[:-1], frames[1:]):
            m = np.abs(a.vectors.conj().T @ b.vectors)
            assert m.diagonal().min() > 0.99


class TestPopulationTrace:
    def test_initialization(self):
        trace = population_trace(X, Z, linear(50.0), TrotterPlan(dt=0.5))
        assert trace.populations[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert np.all(trace.populations[0, 1:] < 1e-12)

    def test_conservation(self):
        trace = population_trace(X, Z, linear(100.0), TrotterPlan(dt=0.5))
        sums = trace.populations.sum(axis=1)
        np.testing.assert_allclose(sums, 1.0, atol=1e-9)

    def test_midpoint_dip_exceeds_final_deficit(self):
        trace = population_trace(X, Z, linear(100.0), TrotterPlan(dt=0.5))
        deficit = trace.ground_deficit()
        mid = np.argmin(np.abs(trace.u_values - 0.5))
        assert deficit[mid] > deficit[-1]

    @pytest.mark.parametrize("dt", [0.1, 0.3, 0.5])
    def test_self_healing(self, dt):
        trace = population_trace(X, Z, linear(100.0), TrotterPlan(dt=dt))
        deficit = trace.ground_deficit()
        assert deficit.max() >= 10.0 * deficit[-1]

    def test_short_time_quadratic_in_dt(self):
        # fixed t/T = 0.1: deficit grows quadratically with the step size
        # (window above the continuous-evolution floor, ~1e-6 here)
        dts = np.geomspace(0.1, 0.6, 8)
        vals = []
        for dt in dts:
            trace = population_trace(X, Z, linear(100.0),
                                     TrotterPlan(dt=dt, fraction=0.1))
            vals.append(1.0 - abs(trace.overlaps[-1, 0]))
        fit = fit_power_law(dts, np.array(vals), (dts[0], dts[-1]))
        assert fit.exponent == pytest.approx(2.0, abs=0.2)

    def test_csv(self, tmp_path):
        trace = population_trace(X, Z, linear(10.0), TrotterPlan(dt=1.0))
        path = tmp_path / "pops.csv"
        trace.write_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "t,u,pop_0,pop_1"
        assert len(lines) == len(trace.times) + 1


class TestCouplingDiagnostics:
    def test_r_vanishes_at_endpoints(self):
        for t in (0.0, 100.0):
            r_mat, _, _ = coupling_diagnostics(X, Z, linear(100.0), 100.0, 0.1, t)
            assert np.abs(r_mat).max() < 1e-8

    def test_r_nonzero_inside(self):
        r_mat, _, _ = coupling_diagnostics(X, Z, linear(100.0), 100.0, 0.1, 30.0)
        assert np.abs(r_mat).max() > 1e-6

    def test_r_linear_in_dt(self):
        dts = np.geomspace(0.01, 0.2, 10)
        vals = []
        for dt in dts:
            r_mat, _, _ = coupling_diagnostics(X, Z, linear(100.0), 100.0, dt, 30.0)
            vals.append(np.abs(r_mat).max())
        fit = fit_power_law(dts, np.array(vals), (dts[0], dts[-1]))
        assert fit.exponent == pytest.approx(1.0, abs=0.15)

    def test_s_and_q_scale_inverse_T(self):
        norms = []
        for T in (50.0, 100.0, 200.0, 400.0):
            _, s_mat, q_mat = coupling_diagnostics(X, Z, linear(T), T, 0.1, 0.3 * T)
            norms.append((np.abs(s_mat).max(), np.abs(q_mat).max()))
        s_vals = np.array([n[0] for n in norms])
        q_vals = np.array([n[1] for n in norms])
        ts = np.array([50.0, 100.0, 200.0, 400.0])
        assert fit_power_law(ts, s_vals, (10, 1e3)).exponent == pytest.approx(-1.0, abs=0.2)
        assert fit_power_law(ts, q_vals, (10, 1e3)).exponent == pytest.approx(-1.0, abs=0.2)
