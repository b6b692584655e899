import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dampfilter.channels import (
    DampingParams,
    damp_qubit,
    damp_slot,
    damping_kraus,
    damping_probability,
    two_qubit_damping,
)
from dampfilter.gates import bell_pair
from dampfilter.metrics import state_fidelity
from dampfilter.qops import apply_kraus, completeness_defect, random_density_matrix

probs = st.floats(0.0, 1.0)


def test_probability_values():
    assert damping_probability(0.0, 2.0) == 0.0
    assert abs(damping_probability(1.0, 1.0) - 0.6321205588285577) < 1e-15
    assert abs(damping_probability(0.8, 0.8) - 0.63) < 5e-3
    assert abs(damping_probability(0.1, 1.0) - 0.09516258196404048) < 1e-15


def test_probability_errors():
    with pytest.raises(ValueError):
        damping_probability(1.0, 0.0)
    with pytest.raises(ValueError):
        damping_probability(-1.0, 1.0)


def test_damping_params():
    dp = DampingParams(0.4, 0.8)
    assert abs(dp.p - (1 - np.exp(-0.5))) < 1e-15
    assert abs(dp.pbar - np.exp(-0.5)) < 1e-15


def test_kraus_values():
    k0, k1 = damping_kraus(0.36).kraus
    assert np.allclose(k0, np.diag([1.0, 0.8]), atol=1e-15)
    assert abs(k1[0, 1] - 0.6) < 1e-15
    z0, z1 = damping_kraus(0.0).kraus
    assert np.array_equal(z0, np.eye(2)) and not z1.any()
    f0, f1 = damping_kraus(1.0).kraus
    assert np.array_equal(f0, np.diag([1, 0])) and np.array_equal(f1, [[0, 1], [0, 0]])


def test_kraus_rejects_bad_p():
    for bad in (-0.1, 1.1):
        with pytest.raises(ValueError):
            damping_kraus(bad)


@given(probs)
def test_kraus_completeness(p):
    assert completeness_defect(damping_kraus(p).kraus) < 1e-15


@settings(deadline=None)
@given(probs, st.integers(0, 2**32 - 1))
def test_kraus_matches_closed_form(p, seed):
    rho = random_density_matrix(2, np.random.default_rng(seed))
    assert np.allclose(apply_kraus(rho, damping_kraus(p).kraus), damp_qubit(rho, p), atol=1e-14)


@settings(deadline=None)
@given(probs, st.integers(0, 2**32 - 1))
def test_ground_population_never_decreases(p, seed):
    rho = random_density_matrix(2, np.random.default_rng(seed))
    assert damp_qubit(rho, p)[0, 0].real >= rho[0, 0].real - 1e-15


@settings(deadline=None)
@given(probs, probs, st.integers(0, 2**32 - 1))
def test_semigroup(pa, pb, seed):
    rho = random_density_matrix(2, np.random.default_rng(seed))
    two = damp_qubit(damp_qubit(rho, pa), pb)
    one = damp_qubit(rho, 1 - (1 - pa) * (1 - pb))
    assert np.abs(two - one).max() < 1e-12


@settings(deadline=None)
@given(probs, probs, st.integers(0, 2**32 - 1))
def test_local_damping_commutes(p1, p2, seed):
    rho = random_density_matrix(4, np.random.default_rng(seed))
    a = damp_slot(damp_slot(rho, (2, 2), 0, p1), (2, 2), 1, p2)
    b = damp_slot(damp_slot(rho, (2, 2), 1, p2), (2, 2), 0, p1)
    assert np.abs(a - b).max() < 1e-12
    assert np.abs(a - two_qubit_damping(rho, p1, p2)).max() < 1e-12


def test_two_qubit_identity(rng):
    rho = random_density_matrix(4, rng)
    assert np.allclose(two_qubit_damping(rho, 0, 0), rho)


def test_damped_singlet():
    p = 0.3
    out = two_qubit_damping(bell_pair("psi-"), p, p)
    ref = p * np.diag([1, 0, 0, 0]) + (1 - p) * bell_pair("psi-")
    assert np.allclose(out, ref, atol=1e-15)


def test_damped_phi_plus_fidelity():
    out = two_qubit_damping(bell_pair("phi+"), 0.5, 0.5)
    assert abs(state_fidelity(out, bell_pair("phi+")) - 0.625) < 1e-14


def test_two_qubit_rejects_wrong_dim():
    with pytest.raises(ValueError):
        two_qubit_damping(np.eye(2) / 2, 0.1, 0.1)
