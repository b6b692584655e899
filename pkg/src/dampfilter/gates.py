"""Gate library: logic gates, the MS gate, carrier and red-sideband pulses.

Pulses are built block-wise: every generator used here splits the space into
two-level doublets plus untouched states, so each exponential is a product of
exact 2x2 rotations.

Level conventions
-----------------
System ion: ``|0>, |1>, |r>`` at indices 0, 1, 2. The carrier couples
``|0> <-> |r>`` and the system red sideband is resonant with
``|r, n> <-> |0, n+1>``.
Ancilla ion: ``|0_a>, |1_a>`` at indices 0, 1; its red sideband is resonant
with ``|1_a, n> <-> |0_a, n+1>``.
Ion-mode operators use the layout ``(ion, mode)`` with ``n_max + 1`` Fock
levels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qops import I2, SX, SY, SZ, ket, pure, tensor

LEVEL_0, LEVEL_1, LEVEL_R = 0, 1, 2


@dataclass(frozen=True)
class PulseSpec:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if self.theta < 0:
            raise ValueError("pulse area must be non-negative")


@dataclass(frozen=True)
class PulseTiming:
    rabi: float  # rad/s
    duration: float  # s

    def __post_init__(self):
        if self.rabi <= 0:
            raise ValueError("Rabi frequency must be positive")
        if self.duration < 0:
            raise ValueError("duration must be non-negative")

    @property
    def area(self) -> float:
        return self.rabi * self.duration


def hadamard() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def cnot() -> np.ndarray:
    """CNOT with the left qubit as control."""
    u = np.eye(4, dtype=complex)
    u[2:, 2:] = SX
    return u


_BELL_LABELS = {
    ("+", 0): "phi+",
    ("-", 0): "phi-",
    ("+", 1): "psi+",
    ("-", 1): "psi-",
}
BELL_NAMES = ("phi+", "phi-", "psi+", "psi-")


def _bell_name(label) -> str:
    if isinstance(label, str):
        name = label.lower().replace("_", "").replace("Φ", "phi").replace("Ψ", "psi")
        if name in BELL_NAMES:
            return name
    elif isinstance(label, tuple) and label in _BELL_LABELS:
        return _BELL_LABELS[label]
    raise ValueError(f"unknown Bell label {label!r}")


def bell_input(label) -> np.ndarray:
    """Computational product state that ``CNOT (H x I)`` maps onto the Bell pair.

    ``'+'``/``'-'`` puts the first qubit in ``|0>``/``|1>`` (so that ``H``
    yields ``|+>``/``|->``); the second qubit holds the label's 0 or 1.
    """
    name = _bell_name(label)
    first = ket(0 if name.endswith("+") else 1, 2)
    second = ket(0 if name.startswith("phi") else 1, 2)
    return np.kron(first, second)


def bell_state(label) -> np.ndarray:
    """State vector of a Bell pair, label ``('+', 0)`` or ``'phi+'`` style."""
    name = _bell_name(label)
    s = 1 / np.sqrt(2)
    sign = 1 if name.endswith("+") else -1
    v = np.zeros(4, dtype=complex)
    if name.startswith("phi"):
        v[0], v[3] = s, sign * s
    else:
        v[1], v[2] = s, sign * s
    return v


def bell_pair(label) -> np.ndarray:
    return pure(bell_state(label))


def ms_gate() -> np.ndarray:
    """Molmer-Sorensen gate ``XX(pi/2) = (I - i X x X)/sqrt(2)``."""
    return (np.eye(4) - 1j * tensor(SX, SX)) / np.sqrt(2)


def doublet_rotation(
    dim: int,
    pairs: Sequence[tuple[int, int]],
    angles: Sequence[float],
    phi: float = 0.0,
) -> np.ndarray:
    """Exact ``exp{i(a/2)(e^{i phi}|u><l| + e^{-i phi}|l><u|)}`` over disjoint doublets.

    ``pairs`` lists ``(u, l)`` index pairs and ``angles`` the rotation angle
    ``a`` of each; indices in no pair are left alone.
    """
    u = np.eye(dim, dtype=complex)
    seen: set[int] = set()
    for (up, lo), a in zip(pairs, angles, strict=True):
        if up in seen or lo in seen or up == lo:
            raise ValueError("doublets must be disjoint")
        seen.update((up, lo))
        c, s = np.cos(a / 2), np.sin(a / 2)
        u[up, up] = c
        u[lo, lo] = c
        u[up, lo] = 1j * s * np.exp(1j * phi)
        u[lo, up] = 1j * s * np.exp(-1j * phi)
    return u


def carrier(theta: float, phi: float = 0.0) -> np.ndarray:
    """Carrier pulse on the three-level system ion, coupling ``|0> <-> |r>``.

    ``|1>`` is a spectator. With ``cos(theta/2) = sqrt(1 - p_r)`` the
    amplitude left in ``|0>`` is ``sqrt(1 - p_r)``.
    """
    return doublet_rotation(3, [(LEVEL_R, LEVEL_0)], [theta], phi)


def carrier_duration(p_r: float, rabi: float) -> float:
    """Carrier time ``t1 = (2/rabi) arccos(sqrt(1 - p_r))`` for reversal strength ``p_r``."""
    if not 0.0 <= p_r <= 1.0:
        raise ValueError(f"p_r must lie in [0, 1], got {p_r}")
    if rabi <= 0:
        raise ValueError("Rabi frequency must be positive")
    return 2.0 / rabi * float(np.arccos(np.sqrt(1.0 - p_r)))


def carrier_area(p_r: float) -> float:
    return carrier_duration(p_r, 1.0)


def red_sideband(
    theta: float,
    phi: float,
    n_max: int,
    ion_dim: int = 3,
    upper: int = LEVEL_R,
    lower: int = LEVEL_0,
) -> np.ndarray:
    """Red-sideband pulse on ``ion x mode``.

    Generator ``e^{i phi} s+ a + e^{-i phi} s- a^dag`` with ``s+ = |upper><lower|``.
    The doublet ``{|upper, n>, |lower, n+1>}`` rotates by ``theta sqrt(n+1)``.
    ``|upper, n_max>`` has no partner inside the truncation and is left
    unchanged, which is exactly what the truncated generator does.

    Defaults describe the system ion (``|r> <-> |0>``); pass ``ion_dim=2,
    upper=1, lower=0`` for an ancilla qubit.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    nf = n_max + 1
    pairs = [(upper * nf + n, lower * nf + n + 1) for n in range(n_max)]
    angles = [theta * np.sqrt(n + 1) for n in range(n_max)]
    return doublet_rotation(ion_dim * nf, pairs, angles, phi)


def ancilla_red_sideband(theta: float, phi: float, n_max: int) -> np.ndarray:
    return red_sideband(theta, phi, n_max, ion_dim=2, upper=1, lower=0)


def zz_phase_gate(chi: float) -> np.ndarray:
    """``exp(i (chi/2) Z x Z)``."""
    zz = np.array([1, -1, -1, 1])
    return np.diag(np.exp(0.5j * chi * zz))


def y_rotation(theta: float) -> np.ndarray:
    """``exp(i (theta/2) Y)``."""
    return np.cos(theta / 2) * I2 + 1j * np.sin(theta / 2) * SY


def z_rotation(theta: float) -> np.ndarray:
    """``exp(i (theta/2) Z)``."""
    return np.cos(theta / 2) * I2 + 1j * np.sin(theta / 2) * SZ
