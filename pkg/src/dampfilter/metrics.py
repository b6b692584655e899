"""Fidelity functionals and closed-form reference curves."""

from __future__ import annotations


import numpy as np

from .qops import PSD_TOL, KrausChannel, choi_from_superoperator, dagger

PURITY_TOL = 1e-10


def state_fidelity(rho: np.ndarray, target: np.ndarray) -> float:
    """Overlap ``<psi|rho|psi>`` with a pure target.

    ``target`` may be a state vector or a rank-one density matrix.
    """
    rho = np.asarray(rho, dtype=complex)
    target = np.asarray(target, dtype=complex)
    if target.ndim == 1:
        psi = target / np.linalg.norm(target)
    else:
        if abs(np.trace(target @ target) - 1.0) > PURITY_TOL:
            raise ValueError("fidelity target must be a pure state")
        psi = np.linalg.eigh(target)[1][:, -1]
    if rho.shape != (psi.size, psi.size):
        raise ValueError("state and target dimensions differ")
    return float(np.real(psi.conj() @ rho @ psi))


def maximally_entangled(d: int) -> np.ndarray:
    """``sum_a |a>|a> / sqrt(d)`` on reference x system."""
    return np.eye(d, dtype=complex).reshape(d * d) / np.sqrt(d)


def success_probability(channel: KrausChannel) -> float:
    """Trace of the channel output for the maximally mixed input.

    Equals the post-selection weight when the channel acts on one half of a
    maximally entangled pair.
    """
    d = channel.dim_in
    return float(np.real(sum(np.trace(dagger(k) @ k) for k in channel.kraus)) / d)


def entanglement_fidelity(
    channel: KrausChannel,
    u_id: np.ndarray,
    method: str = "kraus",
    weight: float | None = None,
) -> float:
    """Entanglement fidelity of ``channel`` with respect to the ideal unitary.

    ``F_e = sum_k |Tr(U^dag E_k)|^2 / d^2`` (``method="kraus"``), or the
    overlap of the Choi state with ``(I x U)|phi>`` (``method="choi"``). Both
    are divided by ``weight``; it defaults to :func:`success_probability`,
    which is 1 for trace-preserving maps.
    """
    u_id = np.asarray(u_id, dtype=complex)
    d = channel.dim_in
    if channel.dim_out != d or u_id.shape != (d, d):
        raise ValueError("channel and target unitary dimensions differ")
    if weight is None:
        weight = success_probability(channel)
    if method == "kraus":
        raw = sum(abs(np.trace(dagger(u_id) @ k)) ** 2 for k in channel.kraus) / d**2
    elif method == "choi":
        choi_state = channel.choi() / d
        v = np.kron(np.eye(d), u_id) @ maximally_entangled(d)
        raw = np.real(v.conj() @ choi_state @ v)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(raw / weight)


def avg_gate_fidelity(F_e: float, d: int) -> float:
    return (d * F_e + 1.0) / (d + 1.0)


def analytic_unfiltered(p: float) -> float:
    """Average gate fidelity of the MS gate followed by damping on both qubits."""
    return 0.2 * (1.0 + (1.0 + np.sqrt(1.0 - p)) ** 4 / 4.0)


def analytic_filtered(p: float) -> float:
    """Same, with the matched reversal filter (``p_r = p``) after the damping."""
    return 0.2 * (1.0 + 16.0 / (2.0 + p) ** 2)


def analytic_success(p: float) -> float:
    """Filter success probability for a maximally mixed two-qubit input."""
    return (1.0 - p) ** 2 * (2.0 + p) ** 2 / 4.0


def psi_minus_references(p: float) -> dict[str, float]:
    """Closed forms for a damped singlet filtered at ``p_r = p``."""
    return {
        "f_unfiltered": 1.0 - p,
        "f_filtered": 1.0 / (1.0 + p),
        "p_success": (1.0 - p) ** 2 * (1.0 + p),
    }


def haar_states(dim: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((samples, dim)) + 1j * rng.standard_normal((samples, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_average_fidelity(
    channel: KrausChannel, u_id: np.ndarray, samples: int, seed: int, chunk: int = 20000
) -> tuple[float, float]:
    """Monte Carlo average of ``<psi|U^dag L(psi) U|psi>`` over Haar-random ``psi``.

    Here ``L`` is the full noisy implementation, so ``U^dag E_k`` is what gets
    sandwiched. Returns the sample mean and its standard error.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    u_id = np.asarray(u_id, dtype=complex)
    d = channel.dim_in
    rng = np.random.default_rng(seed)
    ops = [dagger(u_id) @ k for k in channel.kraus]
    values = []
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        psi = haar_states(d, n, rng)
        f = np.zeros(n)
        for op in ops:
            f += np.abs(np.einsum("si,ij,sj->s", psi.conj(), op, psi)) ** 2
        values.append(f)
        done += n
    values = np.concatenate(values)
    stderr = float(values.std(ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return float(values.mean()), stderr


def kraus_from_superoperator(
    sop: np.ndarray, d_in: int, d_out: int | None = None, tol: float = 1e-12
) -> list[np.ndarray]:
    """Minimal Kraus list from a row-major superoperator via the Choi eigendecomposition.

    Raises ``ValueError`` if the Choi matrix has an eigenvalue below ``-PSD_TOL``.
    """
    d_out = d_in if d_out is None else d_out
    choi = choi_from_superoperator(sop, d_in, d_out)
    choi = 0.5 * (choi + dagger(choi))
    lam, vec = np.linalg.eigh(choi)
    if lam[0] < -PSD_TOL:
        raise ValueError(f"map is not completely positive (Choi eigenvalue {lam[0]:.3e})")
    scale = max(lam[-1], 0.0)
    kraus = []
    for val, v in zip(lam[::-1], vec.T[::-1]):
        if val <= tol * max(scale, 1.0):
            break
        kraus.append(np.sqrt(val) * v.reshape(d_in, d_out).T)
    return kraus


def choi_rank(sop: np.ndarray, d_in: int, d_out: int | None = None, tol: float = 1e-9) -> int:
    d_out = d_in if d_out is None else d_out
    lam = np.linalg.eigvalsh(choi_from_superoperator(sop, d_in, d_out))
    return int(np.sum(lam > tol * max(lam[-1], 1e-300)))


def superoperator_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max-entry distance between two superoperators."""
    return float(np.abs(np.asarray(a) - np.asarray(b)).max())


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    diff = np.asarray(a) - np.asarray(b)
    return 0.5 * float(np.abs(np.linalg.eigvalsh(0.5 * (diff + dagger(diff)))).sum())

