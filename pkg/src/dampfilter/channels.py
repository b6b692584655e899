"""Amplitude-damping channels and the exponential decay model."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qops import KrausChannel, apply_local_kraus


def damping_probability(t: float, T1: float) -> float:
    """Probability that an excitation has decayed after time ``t``.

    ``p = 1 - exp(-t/T1)``. Computed with ``expm1`` so small ``t/T1`` keeps
    full relative precision.
    """
    if T1 <= 0:
        raise ValueError(f"T1 must be positive, got {T1}")
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    return float(-np.expm1(-t / T1))


@dataclass(frozen=True)
class DampingParams:
    t: float
    T1: float
    p: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "p", damping_probability(self.t, self.T1))

    @property
    def pbar(self) -> float:
        return float(np.exp(-self.t / self.T1))


def _check_p(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return p


def damping_kraus(p: float) -> KrausChannel:
    """Kraus pair ``K0 = diag(1, sqrt(1-p))``, ``K1 = sqrt(p)|0><1|``."""
    p = _check_p(p)
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(p)], [0.0, 0.0]], dtype=complex)
    return KrausChannel((k0, k1), trace_preserving=True)


def damp_qubit(rho: np.ndarray, p: float) -> np.ndarray:
    """Closed-form single-qubit damping, used as the oracle for the Kraus route.

    ``rho00 -> rho00 + p rho11``, coherences scale by ``sqrt(1-p)``,
    ``rho11 -> (1-p) rho11``.
    """
    p = _check_p(p)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError("damp_qubit expects a 2x2 matrix")
    s = np.sqrt(1.0 - p)
    return np.array(
        [
            [rho[0, 0] + p * rho[1, 1], s * rho[0, 1]],
            [s * rho[1, 0], (1.0 - p) * rho[1, 1]],
        ]
    )


def damp_slot(rho: np.ndarray, dims, slot: int, p: float) -> np.ndarray:
    """Damp one qubit slot of a composite state."""
    out, _ = apply_local_kraus(rho, dims, slot, damping_kraus(p).kraus)
    return out


def two_qubit_damping(rho: np.ndarray, p1: float, p2: float) -> np.ndarray:
    """Independent damping on both qubits of a two-qubit state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"two_qubit_damping expects a 4x4 state, got {rho.shape}")
    rho = damp_slot(rho, (2, 2), 0, p1)
    return damp_slot(rho, (2, 2), 1, p2)
