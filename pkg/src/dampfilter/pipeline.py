"""Gate-level figures of merit for the MS gate, damping, and a per-qubit filter.

The MS gate acts on one half of a maximally entangled reference-system pair
(``4 x 2 x 2``), both system qubits are damped, and each is then passed
through a post-selected filter channel. Filter channels may output a
three-level ion; anything outside the qubit subspace is leakage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import scheme_a, scheme_b
from .channels import damp_slot
from .gates import ms_gate
from .metrics import avg_gate_fidelity, maximally_entangled
from .qops import KrausChannel, apply_local_kraus, pure, tensor
from .filtering import EmptyPostSelectionError, reversal_operator

D = 4


@dataclass(frozen=True)
class GateFigures:
    f_unfiltered: float
    f_filtered: float
    p_success: float
    leakage: float = 0.0

    @property
    def values(self) -> tuple[float, float, float]:
        return self.f_unfiltered, self.f_filtered, self.p_success


def _target(u_id: np.ndarray) -> np.ndarray:
    return tensor(np.eye(D), u_id) @ maximally_entangled(D)


def damped_choi_state(p1: float, p2: float, u_id: np.ndarray | None = None) -> np.ndarray:
    """``(I x eps o U)(|phi><phi|)`` on reference x s1 x s2."""
    u_id = ms_gate() if u_id is None else u_id
    rho = pure(_target(u_id))
    rho = damp_slot(rho, (D, 2, 2), 1, p1)
    return damp_slot(rho, (D, 2, 2), 2, p2)


def gate_figures(
    p1: float,
    p2: float,
    filters: tuple[KrausChannel, KrausChannel],
    u_id: np.ndarray | None = None,
    discard_leakage: bool = False,
) -> GateFigures:
    """Unfiltered/filtered average gate fidelity and success probability."""
    u_id = ms_gate() if u_id is None else u_id
    v = _target(u_id)
    rho = damped_choi_state(p1, p2, u_id)
    f_unf = avg_gate_fidelity(float(np.real(v.conj() @ rho @ v)), D)

    out, dims = apply_local_kraus(rho, (D, 2, 2), 1, filters[0].kraus)
    out, dims = apply_local_kraus(out, dims, 2, filters[1].kraus)
    q = out.reshape(dims + dims)[:, :2, :2, :, :2, :2].reshape(4 * D, 4 * D)
    total = float(np.trace(out).real)
    qubit_weight = float(np.trace(q).real)
    weight = qubit_weight if discard_leakage else total
    if weight <= 1e-14:
        raise EmptyPostSelectionError("filter annihilates the Choi state")
    f_e = float(np.real(v.conj() @ q @ v)) / weight
    return GateFigures(f_unf, avg_gate_fidelity(f_e, D), weight, (total - qubit_weight) / total)


def ideal_figures(p: float, p_r: float | None = None) -> GateFigures:
    p_r = p if p_r is None else p_r
    m = KrausChannel([reversal_operator(p_r)], trace_preserving=False)
    return gate_figures(p, p, (m, m))


def scheme_a_figures(
    p: float,
    nbar: float = 0.0,
    n_max: int = scheme_a.DEFAULT_N_MAX,
    p_r: float | None = None,
    discard_leakage: bool = False,
) -> GateFigures:
    p_r = p if p_r is None else p_r
    ch = scheme_a.block_conditional_channel(p_r, scheme_a.ThermalModeSpec(nbar, n_max))
    return gate_figures(p, p, (ch, ch), discard_leakage=discard_leakage)


def scheme_b_figures(
    p: float,
    nbar: float = 0.0,
    mode: str = scheme_b.SCALE_ZZ_ONLY,
    p_r: float | None = None,
    chain: scheme_b.ChainSpec | None = None,
) -> GateFigures:
    p_r = p if p_r is None else p_r
    chain = scheme_b.ChainSpec.uniform(nbar) if chain is None else chain
    ch = scheme_b.scheme_b_channel(p_r, chain, mode)
    return gate_figures(p, p, (ch, ch))
