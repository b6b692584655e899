"""Weak-measurement reversal filter against amplitude damping on two-qubit entangled states."""

from .channels import damping_kraus, damping_probability, two_qubit_damping
from .filtering import apply_filter, four_outcome_measurement, match_strength, reversal_operator
from .gates import bell_pair, ms_gate
from .metrics import (
    analytic_filtered,
    analytic_success,
    analytic_unfiltered,
    avg_gate_fidelity,
    entanglement_fidelity,
    state_fidelity,
)
from .scheme_a import ThermalModeSpec, run_scheme_a
from .scheme_b import ChainSpec, run_scheme_b

__all__ = [
    "ChainSpec",
    "ThermalModeSpec",
    "analytic_filtered",
    "analytic_success",
    "analytic_unfiltered",
    "apply_filter",
    "avg_gate_fidelity",
    "bell_pair",
    "damping_kraus",
    "damping_probability",
    "entanglement_fidelity",
    "four_outcome_measurement",
    "match_strength",
    "ms_gate",
    "reversal_operator",
    "run_scheme_a",
    "run_scheme_b",
    "state_fidelity",
    "two_qubit_damping",
]
__version__ = "0.1.0"
