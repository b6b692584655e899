"""Dense complex linear algebra on composite Hilbert spaces.

Operators and density matrices are plain ``numpy`` complex arrays. A layout is
a sequence of subsystem dimensions; slot 0 is the leftmost tensor factor and
varies slowest in the composite index (``numpy.kron`` ordering).

Post-selected states are kept unnormalized: their trace is the post-selection
weight, and callers divide by it when they need a normalized state.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
# Smallest-eigenvalue floor; absorbs round-off from ~10 sequential maps.
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
UNITARY_TOL = 1e-12

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def ketbra(i: int, j: int, dim: int) -> np.ndarray:
    """Return the matrix unit ``|i><j|`` in dimension ``dim``."""
    op = np.zeros((dim, dim), dtype=complex)
    op[i, j] = 1.0
    return op


def pure(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def destroy(n_levels: int) -> np.ndarray:
    """Annihilation operator on the Fock states ``|0>..|n_levels-1>``."""
    return np.diag(np.sqrt(np.arange(1, n_levels)), k=1).astype(complex)


def dagger(op: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(op)).T


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of the arguments, leftmost factor slowest."""
    if not ops:
        raise ValueError("tensor needs at least one operand")
    return reduce(np.kron, (np.asarray(o, dtype=complex) for o in ops))


def _check_layout(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"invalid layout {dims}")
    return dims


def embed(op: np.ndarray, dims: Sequence[int], slot: int) -> np.ndarray:
    """Return ``I x ... x op x ... x I`` with ``op`` placed on ``slot``."""
    dims = _check_layout(dims)
    op = np.asarray(op, dtype=complex)
    if not 0 <= slot < len(dims):
        raise ValueError(f"slot {slot} outside layout {dims}")
    if op.shape != (dims[slot], dims[slot]):
        raise ValueError(
            f"operator shape {op.shape} does not match slot dimension {dims[slot]}"
        )
    left = int(np.prod(dims[:slot]))
    right = int(np.prod(dims[slot + 1:]))
    return tensor(np.eye(left), op, np.eye(right))


def embed_multi(op: np.ndarray, dims: Sequence[int], slots: Sequence[int]) -> np.ndarray:
    """Place an operator acting on ``slots`` (in the given order) into the full layout."""
    dims = _check_layout(dims)
    slots = [int(s) for s in slots]
    if len(set(slots)) != len(slots) or any(not 0 <= s < len(dims) for s in slots):
        raise ValueError(f"bad slots {slots} for layout {dims}")
    op = np.asarray(op, dtype=complex)
    d_op = int(np.prod([dims[s] for s in slots]))
    if op.shape != (d_op, d_op):
        raise ValueError(f"operator shape {op.shape} does not match slots {slots}")
    rest = [i for i in range(len(dims)) if i not in slots]
    order = slots + rest
    n = len(dims)
    full = np.kron(op, np.eye(int(np.prod([dims[i] for i in rest]))))
    shaped = full.reshape([dims[i] for i in order] * 2)
    back = [order.index(i) for i in range(n)]
    dim = int(np.prod(dims))
    return shaped.transpose(back + [n + b for b in back]).reshape(dim, dim)


def _check_square(rho: np.ndarray, dim: int | None = None) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise ValueError(f"expected dimension {dim}, got {rho.shape[0]}")
    return rho


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = _check_square(u)
    return bool(np.abs(dagger(u) @ u - np.eye(u.shape[0])).max() <= tol)


def is_projector(p: np.ndarray, tol: float = 1e-12) -> bool:
    p = _check_square(p)
    return bool(
        np.abs(p @ p - p).max() <= tol and np.abs(p - dagger(p)).max() <= tol
    )


def min_eigenvalue(rho: np.ndarray) -> float:
    rho = _check_square(rho)
    return float(np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))[0])


def check_density_matrix(rho: np.ndarray, weight: float | None = None) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, PSD and of trace ``weight``.

    ``weight=None`` skips the trace check (any non-negative trace passes).
    """
    rho = _check_square(rho)
    if np.abs(rho - dagger(rho)).max() > HERMITIAN_TOL:
        raise ValueError("density matrix is not Hermitian")
    lam = min_eigenvalue(rho)
    if lam < -PSD_TOL:
        raise ValueError(f"density matrix not PSD (min eigenvalue {lam:.3e})")
    if weight is not None and abs(np.trace(rho) - weight) > TRACE_TOL:
        raise ValueError(f"trace {np.trace(rho).real:.12g} != weight {weight}")


def apply_unitary(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    rho = _check_square(rho)
    u = _check_square(u, rho.shape[0])
    return u @ rho @ dagger(u)


def completeness_defect(kraus: Iterable[np.ndarray]) -> float:
    """Max-norm distance of ``sum K^dag K`` from the identity."""
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    total = sum(dagger(k) @ k for k in kraus)
    return float(np.abs(total - np.eye(total.shape[0])).max())


def apply_kraus(
    rho: np.ndarray, kraus: Iterable[np.ndarray], trace_preserving: bool = False
) -> np.ndarray:
    """Return ``sum_k K rho K^dag``.

    Kraus operators may be rectangular (``d_out x d_in``). With
    ``trace_preserving=True`` the completeness relation is checked first.
    """
    rho = _check_square(rho)
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    if not kraus:
        raise ValueError("empty Kraus list")
    if any(k.shape[1] != rho.shape[0] for k in kraus):
        raise ValueError("Kraus input dimension does not match the state")
    if trace_preserving and completeness_defect(kraus) > TRACE_TOL:
        raise ValueError("Kraus operators violate completeness")
    return sum(k @ rho @ dagger(k) for k in kraus)


def apply_local_kraus(
    rho: np.ndarray, dims: Sequence[int], slot: int, kraus: Iterable[np.ndarray]
) -> tuple[np.ndarray, tuple[int, ...]]:
    """Apply a (possibly dimension-changing) channel to one tensor slot.

    Returns the new state together with the updated layout.
    """
    dims = _check_layout(dims)
    rho = _check_square(rho, int(np.prod(dims)))
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    d_out, d_in = kraus[0].shape
    if d_in != dims[slot]:
        raise ValueError(f"Kraus input dimension {d_in} != slot dimension {dims[slot]}")
    n = len(dims)
    t = rho.reshape(dims + dims)
    out_dims = dims[:slot] + (d_out,) + dims[slot + 1:]
    acc = np.zeros(out_dims + out_dims, dtype=complex)
    for k in kraus:
        # act on the ket index, then on the bra index
        s = np.moveaxis(np.tensordot(k, t, axes=([1], [slot])), 0, slot)
        s = np.moveaxis(np.tensordot(k.conj(), s, axes=([1], [n + slot])), 0, n + slot)
        acc += s
    dim = int(np.prod(out_dims))
    return acc.reshape(dim, dim), out_dims


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``."""
    dims = _check_layout(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise ValueError(f"keep {keep} outside layout {dims}")
    rho = _check_square(rho, int(np.prod(dims)))
    n = len(dims)
    t = rho.reshape(dims + dims)
    # trace from the highest index down so earlier axis numbers stay valid
    for ax in sorted(set(range(n)) - set(keep), reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + t.ndim // 2)
    d = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d, d)


def project_postselect(rho: np.ndarray, proj: np.ndarray) -> np.ndarray:
    """Return the unnormalized branch ``P rho P``; its trace is the branch weight."""
    rho = _check_square(rho)
    proj = _check_square(proj, rho.shape[0])
    if not is_projector(proj):
        raise ValueError("post-selection operator is not an orthogonal projector")
    return proj @ rho @ proj


def superoperator(kraus: Iterable[np.ndarray]) -> np.ndarray:
    """Row-major Liouville matrix: ``vec(K rho K^dag) = (K x conj(K)) vec(rho)``."""
    return sum(np.kron(k, np.conj(k)) for k in (np.asarray(k, dtype=complex) for k in kraus))


def choi_from_superoperator(sop: np.ndarray, d_in: int, d_out: int) -> np.ndarray:
    """Choi matrix ``sum_ij |i><j| x L(|i><j|)`` (input factor first)."""
    sop = np.asarray(sop, dtype=complex)
    return (
        sop.reshape(d_out, d_out, d_in, d_in)
        .transpose(2, 0, 3, 1)
        .reshape(d_in * d_out, d_in * d_out)
    )


def apply_superoperator(sop: np.ndarray, rho: np.ndarray) -> np.ndarray:
    rho = _check_square(rho)
    d_out = int(round(np.sqrt(sop.shape[0])))
    return (sop @ rho.reshape(-1)).reshape(d_out, d_out)


@dataclass(frozen=True)
class KrausChannel:
    """A completely positive map held as a Kraus list.

    ``trace_preserving=False`` marks a post-selected (conditional) branch;
    the trace of its output is the branch probability.
    """

    kraus: tuple[np.ndarray, ...]
    trace_preserving: bool = True

    def __post_init__(self):
        ks = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ks:
            raise ValueError("empty Kraus list")
        if any(k.shape != ks[0].shape for k in ks):
            raise ValueError("Kraus operators must share one shape")
        if self.trace_preserving and completeness_defect(ks) > TRACE_TOL:
            raise ValueError("Kraus operators violate completeness")
        object.__setattr__(self, "kraus", ks)

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return apply_kraus(rho, self.kraus)

    def superoperator(self) -> np.ndarray:
        return superoperator(self.kraus)

    def choi(self) -> np.ndarray:
        return choi_from_superoperator(self.superoperator(), self.dim_in, self.dim_out)

    def then(self, other: "KrausChannel") -> "KrausChannel":
        """Composition ``other o self``."""
        ks = [b @ a for a in self.kraus for b in other.kraus]
        return KrausChannel(ks, self.trace_preserving and other.trace_preserving)

    def __matmul__(self, other: "KrausChannel") -> "KrausChannel":
        """Parallel composition on a product space (``self`` on the left slot)."""
        ks = [np.kron(a, b) for a in self.kraus for b in other.kraus]
        return KrausChannel(ks, self.trace_preserving and other.trace_preserving)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random full-rank (or given rank) density matrix, Ginibre construction."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
