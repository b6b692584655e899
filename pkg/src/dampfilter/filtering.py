"""Hardware-independent reversal filter and its four-outcome measurement.

Filter operators are stored unnormalized (``M_r = diag(sqrt(1-p_r), 1)``);
normalization happens once, through the post-selection weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import damping_probability
from .qops import TRACE_TOL, tensor

CIRCUIT_DERIVED = "circuit_derived"
POVM_PAPER = "povm_paper"
POVM_MODES = (CIRCUIT_DERIVED, POVM_PAPER)


class EmptyPostSelectionError(ValueError):
    """The post-selected branch has zero weight, so no state can be returned."""


@dataclass(frozen=True)
class ReversalStrength:
    p_r: float

    def __post_init__(self):
        if not 0.0 <= self.p_r <= 1.0:
            raise ValueError(f"p_r must lie in [0, 1], got {self.p_r}")

    @property
    def pbar_r(self) -> float:
        return 1.0 - self.p_r


@dataclass(frozen=True)
class FilterOutcome:
    state: np.ndarray
    probability: float
    outcome_bits: tuple[int, int]


def _check_pr(p_r: float) -> float:
    return ReversalStrength(float(p_r)).p_r


def reversal_operator(p_r: float) -> np.ndarray:
    """Success-branch filter ``diag(sqrt(1 - p_r), 1)``."""
    p_r = _check_pr(p_r)
    return np.diag([np.sqrt(1.0 - p_r), 1.0]).astype(complex)


def failure_operator(p_r: float, mode: str = CIRCUIT_DERIVED) -> np.ndarray:
    """Operator attached to the ancilla-excited outcome.

    ``circuit_derived`` gives ``diag(sqrt(p_r), 0)``, which together with
    :func:`reversal_operator` is a complete measurement. ``povm_paper`` gives
    ``diag(sqrt(p_r), 1)``, which is not.
    """
    p_r = _check_pr(p_r)
    if mode == CIRCUIT_DERIVED:
        return np.diag([np.sqrt(p_r), 0.0]).astype(complex)
    if mode == POVM_PAPER:
        return np.diag([np.sqrt(p_r), 1.0]).astype(complex)
    raise ValueError(f"unknown POVM mode {mode!r}; expected one of {POVM_MODES}")


def match_strength(t: float, T1: float) -> ReversalStrength:
    """Reversal strength equal to the decay probability accumulated over ``t``."""
    return ReversalStrength(damping_probability(t, T1))


def _normalize(branch: np.ndarray) -> tuple[np.ndarray, float]:
    weight = float(np.trace(branch).real)
    if weight <= TRACE_TOL * 1e-2:
        raise EmptyPostSelectionError("filter annihilates the state (zero success probability)")
    return branch / weight, weight


def apply_filter(rho: np.ndarray, p_r1: float, p_r2: float) -> tuple[np.ndarray, float]:
    """Post-selected reversal on both qubits.

    Returns:
        The normalized filtered state and the success probability
        ``Tr[(M1 x M2)^dag (M1 x M2) rho]``.

    Raises:
        EmptyPostSelectionError: if the success probability vanishes.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"apply_filter expects a 4x4 state, got {rho.shape}")
    m = tensor(reversal_operator(p_r1), reversal_operator(p_r2))
    return _normalize(m @ rho @ m.conj().T)


def four_outcome_measurement(
    rho: np.ndarray, p_r: float, mode: str = CIRCUIT_DERIVED
) -> list[FilterOutcome]:
    """All four ancilla outcomes ``(a1, a2)`` of the two-qubit filter measurement.

    Bit 0 selects :func:`reversal_operator`, bit 1 :func:`failure_operator`.
    ``probability`` is the unnormalized branch trace; ``state`` is the branch
    normalized by it, or the zero matrix for an impossible outcome. In
    ``povm_paper`` mode the probabilities need not sum to one.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 state, got {rho.shape}")
    ops = (reversal_operator(p_r), failure_operator(p_r, mode))
    outcomes = []
    for a1 in (0, 1):
        for a2 in (0, 1):
            m = tensor(ops[a1], ops[a2])
            branch = m @ rho @ m.conj().T
            prob = float(np.trace(branch).real)
            state = branch / prob if prob > 0 else branch
            outcomes.append(FilterOutcome(state, prob, (a1, a2)))
    return outcomes
