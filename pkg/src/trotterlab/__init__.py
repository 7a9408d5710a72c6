"""Digitized adiabatic state preparation toolkit.

Trotterized and exact evolution of interpolating Pauli-sum Hamiltonians,
infidelity and operator-norm error measurement, closed-form error bounds,
adiabatic-basis diagnostics, variable-time-step digitization, and the
QAOA / annealing correspondence pipeline.
"""

__version__ = "0.1.0"
