"""Entangling-gate realization of the reversal filter.

Per qubit, an ancilla prepared in ``|0_a>`` goes through

    U = Y(pi/2) Z(chi) ZZ(chi) Y(-pi/2),   Y(t) = exp(i t Y/2), Z(t) = exp(i t Z/2),
    ZZ(chi) = exp(i (chi/2) Z_a Z_s),

and is post-selected in ``|0_a>``. The surviving block is
``<0_a|U|0_a> = diag(cos chi, 1)``, which is the reversal filter when
``chi = arccos(sqrt(1 - p_r))``.

Warm axial modes reduce the geometric phase to ``chi * O(nbar)`` with the
first-order correction factor of :func:`thermal_correction`. Phonons are not
simulated explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .filtering import EmptyPostSelectionError
from .gates import y_rotation, z_rotation, zz_phase_gate
from .qops import KrausChannel, embed, embed_multi, ketbra, partial_trace, tensor

SCALE_ZZ_ONLY = "scale_zz_only"
SCALE_ALL = "scale_all"
SCALE_MODES = (SCALE_ZZ_ONLY, SCALE_ALL)

ETA_COM = 0.026
OMEGA_COM = 2 * np.pi * 1.4e6  # rad/s
# axial normal-mode frequencies of a four-ion chain, in units of the COM frequency
AXIAL_RATIOS_N4 = (1.0, np.sqrt(3.0), np.sqrt(5.81), np.sqrt(9.308))


@dataclass(frozen=True)
class ChainSpec:
    eta_com: float = ETA_COM
    freq_ratios: tuple[float, ...] = AXIAL_RATIOS_N4
    nbars: tuple[float, ...] = field(default=(0.0, 0.0, 0.0, 0.0))

    def __post_init__(self):
        ratios = tuple(float(r) for r in self.freq_ratios)
        nbars = tuple(float(n) for n in self.nbars)
        if not ratios or ratios[0] != 1.0 or any(r < 1.0 for r in ratios):
            raise ValueError("frequency ratios must start at 1 and never drop below it")
        if len(nbars) != len(ratios):
            raise ValueError("need one mean phonon number per mode")
        if any(n < 0 for n in nbars):
            raise ValueError("mean phonon numbers must be non-negative")
        object.__setattr__(self, "freq_ratios", ratios)
        object.__setattr__(self, "nbars", nbars)

    @classmethod
    def uniform(cls, nbar: float, eta_com: float = ETA_COM,
                freq_ratios: Sequence[float] = AXIAL_RATIOS_N4) -> "ChainSpec":
        """All modes at the same mean occupation."""
        return cls(eta_com, tuple(freq_ratios), (float(nbar),) * len(freq_ratios))


def thermal_correction(chain: ChainSpec) -> float:
    """``O = 1 - eta^2 * sum_m (w_1/w_m) nbar_m``.

    Raises ``ValueError`` when ``O <= 0``, where the first-order model no
    longer makes sense.
    """
    bracket = sum(n / r for n, r in zip(chain.nbars, chain.freq_ratios))
    o = 1.0 - chain.eta_com**2 * bracket
    if o <= 0:
        raise ValueError(f"correction factor {o:.4g} <= 0: chain too hot for the first-order model")
    return o


def chi_from_strength(p_r: float) -> float:
    if not 0.0 <= p_r <= 1.0:
        raise ValueError(f"p_r must lie in [0, 1], got {p_r}")
    return float(np.arccos(np.sqrt(1.0 - p_r)))


def reversal_unitary_b(chi: float, chi_single: float | None = None) -> np.ndarray:
    """Two-qubit unitary on ``ancilla x system`` (ancilla is the left factor).

    ``chi_single`` overrides the phase of the ancilla z rotation; by default
    it equals the entangling phase ``chi``.
    """
    chi_single = chi if chi_single is None else chi_single
    dims = (2, 2)
    y_plus = embed(y_rotation(np.pi / 2), dims, 0)
    y_minus = embed(y_rotation(-np.pi / 2), dims, 0)
    z = embed(z_rotation(chi_single), dims, 0)
    return y_plus @ z @ zz_phase_gate(chi) @ y_minus


def effective_phases(p_r: float, chain: ChainSpec | None, mode: str = SCALE_ZZ_ONLY) -> tuple[float, float]:
    """``(entangling, single-qubit)`` phases after the thermal correction."""
    if mode not in SCALE_MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {SCALE_MODES}")
    chi = chi_from_strength(p_r)
    o = 1.0 if chain is None else thermal_correction(chain)
    return chi * o, (chi * o if mode == SCALE_ALL else chi)


def scheme_b_channel(p_r: float, chain: ChainSpec | None = None, mode: str = SCALE_ZZ_ONLY) -> KrausChannel:
    """Post-selected single-qubit map: one Kraus operator ``<0_a|U|0_a>``."""
    chi_zz, chi_z = effective_phases(p_r, chain, mode)
    u = reversal_unitary_b(chi_zz, chi_z)
    return KrausChannel([u[:2, :2]], trace_preserving=False)


def run_scheme_b(
    rho_s: np.ndarray,
    p_r: float,
    chain: ChainSpec | None = None,
    mode: str = SCALE_ZZ_ONLY,
) -> tuple[np.ndarray, float]:
    """Simulate both ancilla-system pairs and post-select both ancillas on ``|0_a>``.

    Layout ``(s1, s2, a1, a2)``; returns the normalized system state and the
    joint success probability.
    """
    rho_s = np.asarray(rho_s, dtype=complex)
    if rho_s.shape != (4, 4):
        raise ValueError(f"run_scheme_b expects a 4x4 state, got {rho_s.shape}")
    chi_zz, chi_z = effective_phases(p_r, chain, mode)
    u = reversal_unitary_b(chi_zz, chi_z)
    dims = (2, 2, 2, 2)
    full = embed_multi(u, dims, (3, 1)) @ embed_multi(u, dims, (2, 0))
    rho = tensor(rho_s, ketbra(0, 0, 4))
    proj = tensor(np.eye(4), ketbra(0, 0, 4))
    rho = proj @ full @ rho @ full.conj().T @ proj
    out = partial_trace(rho, dims, [0, 1])
    weight = float(np.trace(out).real)
    if weight <= 1e-14:
        raise EmptyPostSelectionError("no population survives the ancilla post-selection")
    return out / weight, weight
