"""Bound coefficients, lemma bounds, the commutator integral identity, step counts."""

import numpy as np
import pytest

from trotterlab.bounds import (
    coefficients,
    kubo_residual,
    lemma_bounds,
    step_counts,
    theorem1_infidelity_bound,
)
from trotterlab.errors import DomainError, ValidityError
from trotterlab.pauli import PAULI_MATS, PauliSum, operator_norm
from trotterlab.propagators import TrotterPlan, exact_unitary, trotter_unitary
from trotterlab.schedules import linear

X = PauliSum.from_terms([(1.0, "X")])
Z = PauliSum.from_terms([(1.0, "Z")])
XD, ZD = PAULI_MATS["X"], PAULI_MATS["Z"]


def dense_comm(a, b):
    return a @ b - b @ a


class TestCoefficients:
    def test_two_level(self):
        # dense 2x2 oracle for every norm entering the coefficients
        comm = dense_comm(XD, ZD)
        n1 = operator_norm(dense_comm(XD, comm))
        n2 = operator_norm(dense_comm(ZD, dense_comm(ZD, XD)))
        assert (n1, n2) == (pytest.approx(4.0), pytest.approx(4.0))
        rep = coefficients(X, Z)
        assert rep.c1 == pytest.approx(1.0, abs=1e-12)
        assert rep.c2 == pytest.approx(0.25 * operator_norm(comm) ** 2, abs=1e-12)
        assert rep.c2 == pytest.approx(1.0, abs=1e-12)
        assert rep.c3 == pytest.approx((min(n1, n2) + 0.5 * max(n1, n2)) / 12, abs=1e-12)
        assert rep.c3 == pytest.approx(0.5, abs=1e-12)

    def test_commuting_pair(self):
        rep = coefficients(PauliSum.from_terms([(1.0, "ZI")]),
                           PauliSum.from_terms([(1.0, "ZZ")]))
        assert rep.c2 == 0.0 and rep.c3 == 0.0

    def test_c1_is_min_norm(self):
        rep = coefficients(PauliSum.from_terms([(2.0, "X")]), Z)
        assert rep.c1 == pytest.approx(1.0, abs=1e-12)


class TestTheorem1Bound:
    def test_vanishes_with_dt(self):
        rep = coefficients(X, Z)
        assert theorem1_infidelity_bound(rep, 100.0, 1e-9) < 1e-12

    def test_branch_selection(self):
        rep = coefficients(X, Z)
        # T=100, dt=0.01: c2 branch = 1, quadratic branch = (0.01 + 0.005)^2
        val = theorem1_infidelity_bound(rep, 100.0, 0.01)
        assert val == pytest.approx((0.01 + 0.5 * 100.0 * 0.01**2) ** 2, abs=1e-15)
        assert val == pytest.approx(2.25e-4, abs=1e-12)

    def test_saturates_at_two(self):
        rep = coefficients(X, Z)
        assert theorem1_infidelity_bound(rep, 100.0, 50.0) == 2.0

    def test_monotone_in_T_and_dt(self):
        rep = coefficients(X, Z)
        ts = np.linspace(1.0, 300.0, 12)
        dts = np.geomspace(1e-3, 3.0, 12)
        for dt in dts:
            vals = [theorem1_infidelity_bound(rep, t, dt) for t in ts]
            assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))
        for t in ts:
            vals = [theorem1_infidelity_bound(rep, t, dt) for dt in dts]
            assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


class TestLemmaBounds:
    def test_two_level_values(self):
        rep = coefficients(X, Z)
        first, _ = lemma_bounds(rep, 100.0, 0.1)
        assert first == pytest.approx(2.0 * 100.0 * 0.1, abs=1e-12)
        _, second = lemma_bounds(rep, 1.0, 0.01)
        assert second == pytest.approx((0.5 * 4 + 4) * 1.0 * 1e-4 / 12, abs=1e-15)
        assert second == pytest.approx(5e-5, abs=1e-12)

    def test_commuting_pair_zero(self):
        rep = coefficients(PauliSum.from_terms([(1.0, "ZI")]),
                           PauliSum.from_terms([(1.0, "ZZ")]))
        assert lemma_bounds(rep, 10.0, 0.1) == (0.0, 0.0)

    def test_domination_on_two_level_grid(self):
        # measured product-formula error vs the leading lemma bounds (+10%)
        rep = coefficients(X, Z)
        for T in (50.0, 100.0):
            sched = linear(T)
            u_ex = exact_unitary(X, Z, sched, T)
            for dt in (0.01, 0.05, 0.1, 0.3):
                first, second = lemma_bounds(rep, T, dt)
                e1 = operator_norm(trotter_unitary(X, Z, sched, TrotterPlan(dt=dt)) - u_ex)
                e2 = operator_norm(
                    trotter_unitary(X, Z, sched, TrotterPlan(dt=dt, order=2)) - u_ex)
                assert e1 <= 1.1 * first
                assert e2 <= 1.1 * second


class TestKuboResidual:
    def test_commuting_b(self):
        # B commutes with A(t) for all t -> both sides vanish
        a_off = np.diag([1.0, -1.0, 0.5, 0.0]).astype(complex)
        a_slope = np.diag([0.3, 0.1, -0.2, 0.9]).astype(complex)
        b = np.diag([2.0, 1.0, -1.0, 0.0]).astype(complex)
        assert kubo_residual(a_slope, a_off, b, 0.0, 1.0) < 1e-10

    def test_empty_interval(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        a = (a + a.conj().T) / 2
        b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert kubo_residual(a, a, b, 0.7, 0.7) < 1e-12

    @pytest.mark.parametrize("seed", range(20))
    def test_randomized_identity(self, seed):
        rng = np.random.default_rng(1000 + seed)

        def herm():
            m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            return (m + m.conj().T) / 2

        b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert kubo_residual(herm(), herm(), b, 0.0, 1.0) < 1e-8

    def test_rejects_non_hermitian(self):
        bad = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(ValidityError):
            kubo_residual(bad, bad, bad, 0.0, 1.0)


class TestStepCounts:
    def test_plug_in(self):
        r, rp = step_counts(1e-4, 1)
        assert r == pytest.approx(100.0)
        assert rp == pytest.approx(1e6)

    def test_large_p_limit(self):
        r, rp = step_counts(1e-3, 10_000)
        assert rp / r == pytest.approx(1.0, rel=1e-2)

    def test_second_order(self):
        r, rp = step_counts(1e-2, 2)
        assert (r, rp) == (pytest.approx(10.0), pytest.approx(100.0))

    def test_ratio_reproduces_eps_power(self):
        for eps, p in ((1e-2, 1), (1e-2, 2), (1e-4, 1)):
            r, rp = step_counts(eps, p)
            assert rp / r == pytest.approx(eps ** (-1.0 / p), rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            step_counts(2.0, 1)
        with pytest.raises(DomainError):
            step_counts(0.5, 0)
