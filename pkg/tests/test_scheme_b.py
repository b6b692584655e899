import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from dampfilter.channels import two_qubit_damping
from dampfilter.filtering import EmptyPostSelectionError, apply_filter
from dampfilter.gates import BELL_NAMES, bell_pair
from dampfilter.metrics import state_fidelity
from dampfilter.qops import SY, SZ, is_unitary, random_density_matrix, tensor
from dampfilter.scheme_b import (
    AXIAL_RATIOS_N4,
    ETA_COM,
    SCALE_ALL,
    SCALE_MODES,
    SCALE_ZZ_ONLY,
    ChainSpec,
    chi_from_strength,
    effective_phases,
    reversal_unitary_b,
    run_scheme_b,
    scheme_b_channel,
    thermal_correction,
)


def expm_unitary(chi):
    ya = tensor(SY, np.eye(2))
    za = tensor(SZ, np.eye(2))
    zz = tensor(SZ, SZ)
    return (
        expm(0.25j * np.pi * ya)
        @ expm(0.5j * chi * za)
        @ expm(0.5j * chi * zz)
        @ expm(-0.25j * np.pi * ya)
    )


def test_defaults():
    chain = ChainSpec()
    assert chain.eta_com == ETA_COM == 0.026
    assert np.allclose(chain.freq_ratios, [1, np.sqrt(3), np.sqrt(5.81), np.sqrt(9.308)])
    assert chain.freq_ratios == AXIAL_RATIOS_N4


def test_chain_validation():
    with pytest.raises(ValueError):
        ChainSpec(freq_ratios=(2.0, 3.0), nbars=(0, 0))
    with pytest.raises(ValueError):
        ChainSpec(freq_ratios=(1.0, 0.5), nbars=(0, 0))
    with pytest.raises(ValueError):
        ChainSpec(nbars=(0, 0))
    with pytest.raises(ValueError):
        ChainSpec.uniform(-1.0)


def test_unitary_against_expm():
    for chi in (0.0, 0.3, np.pi / 3, np.pi / 2, 1.1):
        u = reversal_unitary_b(chi)
        assert is_unitary(u)
        assert np.allclose(u, expm_unitary(chi), atol=1e-13)
    assert np.allclose(reversal_unitary_b(0.0), np.eye(4), atol=1e-15)


def test_ancilla_block():
    for chi in np.linspace(0, np.pi / 2, 20):
        block = reversal_unitary_b(chi)[:2, :2]
        assert np.abs(block - np.diag([np.cos(chi), 1.0])).max() < 1e-12
    assert np.abs(reversal_unitary_b(np.pi / 2)[:2, :2] - np.diag([0, 1])).max() < 1e-15


def test_chi_from_strength():
    assert chi_from_strength(0.0) == 0.0
    assert abs(chi_from_strength(1.0) - np.pi / 2) < 1e-15
    assert abs(chi_from_strength(0.75) - np.pi / 3) < 1e-15
    p_r = 0.37
    block = reversal_unitary_b(chi_from_strength(p_r))[:2, :2]
    assert np.allclose(block, np.diag([np.sqrt(1 - p_r), 1]), atol=1e-15)
    with pytest.raises(ValueError):
        chi_from_strength(1.2)


def test_thermal_correction_values():
    assert thermal_correction(ChainSpec.uniform(0.0)) == 1.0
    bracket = 1 + 1 / np.sqrt(3) + 1 / np.sqrt(5.81) + 1 / np.sqrt(9.308)
    assert abs(bracket - 2.3200) < 1e-4
    for nbar in (10.0, 50.0):
        assert abs(thermal_correction(ChainSpec.uniform(nbar)) - (1 - 0.026**2 * nbar * bracket)) < 1e-15
    # quoted values were evaluated with the bracket rounded to 2.3200
    assert abs(thermal_correction(ChainSpec.uniform(10.0)) - 0.98432) < 1e-5
    assert abs(thermal_correction(ChainSpec.uniform(50.0)) - 0.92160) < 5e-5
    with pytest.raises(ValueError):
        thermal_correction(ChainSpec.uniform(1e4))


@settings(deadline=None)
@given(st.lists(st.floats(0, 100), min_size=4, max_size=4), st.integers(0, 3), st.floats(0, 50))
def test_thermal_correction_linear(nbars, mode, extra):
    base = ChainSpec(nbars=tuple(nbars))
    bumped = list(nbars)
    bumped[mode] += extra
    slope = ETA_COM**2 / AXIAL_RATIOS_N4[mode]
    diff = thermal_correction(base) - thermal_correction(ChainSpec(nbars=tuple(bumped)))
    assert abs(diff - slope * extra) < 1e-12


def test_thermal_correction_symmetric():
    ratios = (1.0, 2.0, 2.0)
    a = ChainSpec(0.05, ratios, (1.0, 3.0, 7.0))
    b = ChainSpec(0.05, ratios, (1.0, 7.0, 3.0))
    assert thermal_correction(a) == thermal_correction(b)


def test_effective_phases():
    chain = ChainSpec.uniform(50.0)
    o = thermal_correction(chain)
    chi = chi_from_strength(0.5)
    assert effective_phases(0.5, chain, SCALE_ZZ_ONLY) == pytest.approx((chi * o, chi), abs=1e-15)
    assert effective_phases(0.5, chain, SCALE_ALL) == pytest.approx((chi * o, chi * o), abs=1e-15)
    with pytest.raises(ValueError):
        effective_phases(0.5, chain, "other")


@pytest.mark.parametrize("mode", SCALE_MODES)
def test_cold_chain_equals_filter(rng, mode):
    for _ in range(10):
        p = rng.uniform(0, 0.95)
        damped = two_qubit_damping(random_density_matrix(4, rng), p, p)
        rho, w = run_scheme_b(damped, p, ChainSpec.uniform(0.0), mode)
        ref, w_ref = apply_filter(damped, p, p)
        assert np.abs(rho - ref).max() < 1e-12
        assert abs(w - w_ref) < 1e-12


def test_singlet_example():
    p = 0.35
    damped = two_qubit_damping(bell_pair("psi-"), p, p)
    rho, w = run_scheme_b(damped, p)
    assert abs(w - (1 - p) ** 2 * (1 + p)) < 1e-12
    assert abs(state_fidelity(rho, bell_pair("psi-")) - 1 / (1 + p)) < 1e-12


@pytest.mark.parametrize("mode", SCALE_MODES)
def test_zero_strength_identity(rng, mode):
    rho = random_density_matrix(4, rng)
    for nbar in (0.0, 25.0, 50.0):
        out, w = run_scheme_b(rho, 0.0, ChainSpec.uniform(nbar), mode)
        assert np.abs(out - rho).max() < 1e-12
        assert abs(w - 1) < 1e-12


@pytest.mark.parametrize("mode", SCALE_MODES)
def test_hot_chain_succeeds_more_often(mode):
    p = 1 - np.exp(-0.9)
    damped = two_qubit_damping(bell_pair("psi-"), p, p)
    w_cold = run_scheme_b(damped, p, ChainSpec.uniform(0.0), mode)[1]
    w_hot = run_scheme_b(damped, p, ChainSpec.uniform(50.0), mode)[1]
    assert w_hot > w_cold


@pytest.mark.parametrize("label", BELL_NAMES)
@pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
def test_monotone_in_nbar_scale_all(label, p):
    damped = two_qubit_damping(bell_pair(label), p, p)
    fids, weights = [], []
    for nbar in (0, 10, 20, 50):
        rho, w = run_scheme_b(damped, p, ChainSpec.uniform(nbar), SCALE_ALL)
        fids.append(state_fidelity(rho, bell_pair(label)))
        weights.append(w)
    assert all(b <= a + 1e-12 for a, b in zip(fids, fids[1:]))
    assert all(b >= a - 1e-12 for a, b in zip(weights, weights[1:]))


def test_channel_matches_full_simulation(rng):
    chain = ChainSpec.uniform(30.0)
    rho = random_density_matrix(4, rng)
    for mode in SCALE_MODES:
        k = scheme_b_channel(0.6, chain, mode).kraus[0]
        m = np.kron(k, k)
        branch = m @ rho @ m.conj().T
        out, w = run_scheme_b(rho, 0.6, chain, mode)
        assert abs(np.trace(branch).real - w) < 1e-12
        assert np.abs(branch / w - out).max() < 1e-12


def test_errors():
    with pytest.raises(ValueError):
        run_scheme_b(np.eye(2) / 2, 0.2)
    with pytest.raises(EmptyPostSelectionError):
        run_scheme_b(np.diag([1.0, 0, 0, 0]), 1.0)
