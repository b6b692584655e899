"""Quantum-logic-spectroscopy realization of the reversal filter.

One block per system qubit, on ``system ion (0, 1, r) x ancilla x mode``:

1. carrier ``|0> <-> |r>`` with ``cos(theta1/2) = sqrt(1 - p_r)``,
2. system red sideband (``pi`` pulse, ``|r, n> <-> |0, n+1>``),
3. ancilla red sideband (``pi`` pulse, ``|1_a, n> <-> |0_a, n+1>``),
4. projection of the ancilla onto ``|0_a>``.

The mode starts in a Gibbs state. Only the initial mode state is thermal;
the pulse areas are tuned for ``n = 0``, so higher Fock states see the wrong
Rabi angles and the post-selected channel is no longer the ideal filter.

Population left in ``|r>`` after post-selection is leakage. By default it
counts toward the success weight but has no overlap with any qubit target;
``discard_leakage=True`` drops it from the weight instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gates import LEVEL_0, LEVEL_1, ancilla_red_sideband, carrier, carrier_area, red_sideband
from .metrics import kraus_from_superoperator
from .qops import (
    KrausChannel,
    apply_local_kraus,
    embed,
    embed_multi,
    ketbra,
    partial_trace,
    tensor,
)
from .filtering import EmptyPostSelectionError

DEFAULT_N_MAX = 12
GIBBS_TAIL_TOL = 1e-8
QUBIT_LEVELS = (LEVEL_0, LEVEL_1)


@dataclass(frozen=True)
class BlockLayout:
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")

    @property
    def dims(self) -> tuple[int, int, int]:
        return (3, 2, self.n_max + 1)

    @property
    def dim(self) -> int:
        return 6 * (self.n_max + 1)


def gibbs_tail(nbar: float, n_max: int) -> float:
    """Thermal weight above ``n_max``: ``(nbar/(1+nbar))**(n_max+1)``."""
    return (nbar / (1.0 + nbar)) ** (n_max + 1)


@dataclass(frozen=True)
class ThermalModeSpec:
    """Mean phonon number plus Fock cutoff.

    The cutoff is raised on construction until the discarded Gibbs tail is
    below ``1e-8``.
    """

    nbar: float = 0.0
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        if self.nbar < 0:
            raise ValueError("nbar must be non-negative")
        n_max = max(int(self.n_max), 1)
        while gibbs_tail(self.nbar, n_max) >= GIBBS_TAIL_TOL:
            n_max += 1
        object.__setattr__(self, "n_max", n_max)


def thermal_populations(spec: ThermalModeSpec) -> np.ndarray:
    n = np.arange(spec.n_max + 1)
    q = spec.nbar / (1.0 + spec.nbar)
    pn = q**n / (1.0 + spec.nbar)
    return pn / pn.sum()


def thermal_state(spec: ThermalModeSpec) -> np.ndarray:
    """Truncated Gibbs state, renormalized to unit trace."""
    return np.diag(thermal_populations(spec)).astype(complex)


def block_circuit(p_r: float, layout: BlockLayout | int = DEFAULT_N_MAX) -> np.ndarray:
    """Unitary ``O3 O2 O1`` of one block on ``(system, ancilla, mode)``."""
    if not isinstance(layout, BlockLayout):
        layout = BlockLayout(int(layout))
    dims = layout.dims
    o1 = embed(carrier(carrier_area(p_r), 0.0), dims, 0)
    o2 = embed_multi(red_sideband(np.pi, 0.0, layout.n_max), dims, (0, 2))
    o3 = embed_multi(ancilla_red_sideband(np.pi, 0.0, layout.n_max), dims, (1, 2))
    return o3 @ o2 @ o1


def ancilla_projector(layout: BlockLayout) -> np.ndarray:
    return embed(ketbra(0, 0, 2), layout.dims, 1)


def block_superoperator(p_r: float, thermal: ThermalModeSpec) -> np.ndarray:
    """Post-selected block map from a qubit (2x2) to the three-level ion (3x3).

    Built by pushing each matrix unit ``|i><j|`` through the block:
    embed in the ion, attach ``|0_a><0_a|`` and the thermal mode, run the
    circuit, project the ancilla onto ``|0_a>``, trace out ancilla and mode.
    Returns the row-major superoperator of shape ``(9, 4)``.
    """
    layout = BlockLayout(thermal.n_max)
    u = block_circuit(p_r, layout)
    proj = ancilla_projector(layout)
    env = tensor(ketbra(0, 0, 2), thermal_state(thermal))
    sop = np.zeros((9, 4), dtype=complex)
    for a, i in enumerate(QUBIT_LEVELS):
        for b, j in enumerate(QUBIT_LEVELS):
            rho = tensor(ketbra(i, j, 3), env)
            rho = proj @ u @ rho @ u.conj().T @ proj
            sop[:, 2 * a + b] = partial_trace(rho, layout.dims, [0]).reshape(-1)
    return sop


def block_conditional_channel(p_r: float, thermal: ThermalModeSpec) -> KrausChannel:
    """Kraus form (``3 x 2`` operators) of :func:`block_superoperator`."""
    ks = kraus_from_superoperator(block_superoperator(p_r, thermal), 2, 3)
    return KrausChannel(ks, trace_preserving=False)


def qubit_restriction(channel: KrausChannel) -> KrausChannel:
    """Keep only the ``|0>, |1>`` output rows of a block channel."""
    rows = list(QUBIT_LEVELS)
    return KrausChannel([k[rows, :] for k in channel.kraus], trace_preserving=False)


def leakage(channel: KrausChannel, rho: np.ndarray) -> float:
    """Post-selected ``|r>`` population produced from a single-qubit input."""
    out = channel(np.asarray(rho, dtype=complex))
    return float(out[2, 2].real)


def restrict_two_block_output(rho: np.ndarray) -> np.ndarray:
    """Qubit-subspace block of a ``3 x 3`` two-ion state (unnormalized)."""
    t = np.asarray(rho).reshape(3, 3, 3, 3)[:2, :2, :2, :2]
    return t.reshape(4, 4)


def apply_block_pair(
    rho_s: np.ndarray, channel1: KrausChannel, channel2: KrausChannel
) -> np.ndarray:
    """Apply one block channel per qubit; returns the unnormalized ``9 x 9`` ion state."""
    rho, dims = apply_local_kraus(rho_s, (2, 2), 0, channel1.kraus)
    rho, dims = apply_local_kraus(rho, dims, 1, channel2.kraus)
    return rho


def run_scheme_a(
    rho_s: np.ndarray,
    p_r: float,
    thermal: ThermalModeSpec | None = None,
    discard_leakage: bool = False,
) -> tuple[np.ndarray, float]:
    """Filter a two-qubit state with two independent Scheme A blocks.

    Returns:
        ``(rho, P_r)``. ``rho`` is the qubit-subspace part of the
        post-selected state divided by ``P_r``; its trace falls short of one
        by the leaked fraction unless ``discard_leakage`` is set.

    Raises:
        EmptyPostSelectionError: if no population survives post-selection.
    """
    thermal = ThermalModeSpec() if thermal is None else thermal
    channel = block_conditional_channel(p_r, thermal)
    out = apply_block_pair(np.asarray(rho_s, dtype=complex), channel, channel)
    qubits = restrict_two_block_output(out)
    weight = float(np.trace(qubits if discard_leakage else out).real)
    if weight <= 1e-14:
        raise EmptyPostSelectionError("no population survives the ancilla post-selection")
    return qubits / weight, weight
