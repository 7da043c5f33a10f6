"""Channel representations: Kraus sets, Choi states and Stinespring dilations.

Kraus operator order is meaningful throughout the package: the operator at
index 0 is the one an interferometer sees. Nothing here reorders a Kraus set
except :func:`choi_to_kraus` and :func:`orthogonalize`, which deliberately
produce the canonical orthogonal, weight-descending order.

Conventions
-----------
* ``vec`` stacks columns, so ``(I (x) K)|Psi+> = vec(K) / sqrt(d)`` with
  ``|Psi+> = sum_i |i>|i> / sqrt(d)``.
* The Choi state is normalized to trace one: ``(1/d) sum_k vec(K_k) vec(K_k)^dag``.
* A dilation stacks the Kraus blocks ancilla-major, ``V = sum_i |i>_anc (x) K_i``,
  with the ancilla starting in basis state 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import numerics as nx
from .errors import (
    BadArity,
    DimensionMismatch,
    NotHermitian,
    NotIsometry,
    NotPsd,
    NotTracePreserving,
    NotTracePreservingImage,
    TooManyOperators,
    ValidationError,
)

COMPLETENESS_TOL = 1e-9
STATE_TOL = 1e-10
RANK_CUTOFF = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


def vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d, order="F")


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Trace-preserving channel given by an ordered Kraus set."""

    dim: int
    ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        d = int(self.dim)
        if d < 1:
            raise DimensionMismatch(f"dimension must be positive, got {self.dim}")
        ops = tuple(_frozen(nx.as_matrix(k, name=f"Kraus operator {i}")) for i, k in enumerate(self.ops))
        if not ops:
            raise BadArity("a channel needs at least one Kraus operator")
        for i, k in enumerate(ops):
            if k.shape != (d, d):
                raise DimensionMismatch(f"Kraus operator {i} has shape {k.shape}, expected {(d, d)}")
        if len(ops) > d * d:
            raise TooManyOperators(f"{len(ops)} Kraus operators exceed d^2 = {d * d}")
        residual = nx.opnorm(sum(nx.dagger(k) @ k for k in ops) - np.eye(d))
        if residual > COMPLETENESS_TOL:
            raise NotTracePreserving(residual, COMPLETENESS_TOL)
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "ops", ops)

    def __len__(self) -> int:
        return len(self.ops)

    @property
    def first(self) -> np.ndarray:
        return self.ops[0]

    def stacked(self) -> np.ndarray:
        """Kraus operators as an ``(n, d, d)`` array (a fresh copy)."""
        return np.array(self.ops)

    def gram(self) -> np.ndarray:
        """Inner-product matrix ``G[i, j] = tr(K_i^dag K_j)``."""
        k = np.array([vec(op) for op in self.ops])
        return k.conj() @ k.T


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = nx.as_matrix(self.matrix, name="density matrix")
        d = int(self.dim)
        if m.shape != (d, d):
            raise DimensionMismatch(f"density matrix has shape {m.shape}, expected {(d, d)}")
        if nx.opnorm(m - nx.dagger(m)) > STATE_TOL:
            raise NotHermitian("density matrix is not Hermitian")
        m = 0.5 * (m + nx.dagger(m))
        if np.linalg.eigvalsh(m).min() < -STATE_TOL:
            raise NotPsd("density matrix has a negative eigenvalue")
        if abs(np.trace(m) - 1.0) > STATE_TOL:
            raise ValidationError(f"density matrix trace is {np.trace(m).real:.12g}, expected 1")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityMatrix":
        return cls(d, np.eye(d) / d)

    @classmethod
    def pure(cls, psi, *, normalize_tol: float | None = None) -> "DensityMatrix":
        """Projector onto ``psi``.

        By default ``psi`` is rescaled to unit norm. With ``normalize_tol`` set,
        a norm further than that from one is rejected instead.
        """
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(psi)
        if nrm == 0.0 or not np.isfinite(nrm):
            raise ValidationError("state vector has zero or non-finite norm")
        if normalize_tol is not None and abs(nrm - 1.0) > normalize_tol:
            raise ValidationError(f"state vector norm {nrm:.12g} is not 1 within {normalize_tol:.0e}")
        psi = psi / nrm
        return cls(psi.size, np.outer(psi, psi.conj()))


@dataclass(frozen=True, eq=False)
class ChoiState:
    """Trace-one Choi state on ``d^2`` dimensions, input factor first."""

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        d = int(self.dim)
        m = nx.as_matrix(self.matrix, name="Choi matrix")
        if m.shape != (d * d, d * d):
            raise DimensionMismatch(f"Choi matrix has shape {m.shape}, expected {(d * d, d * d)}")
        if nx.opnorm(m - nx.dagger(m)) > nx.HERMITIAN_TOL:
            raise NotHermitian("Choi matrix is not Hermitian")
        m = 0.5 * (m + nx.dagger(m))
        if np.linalg.eigvalsh(m).min() < -STATE_TOL:
            raise NotPsd("Choi matrix has a negative eigenvalue")
        if abs(np.trace(m) - 1.0) > STATE_TOL:
            raise NotTracePreservingImage(f"Choi trace is {np.trace(m).real:.12g}, expected 1")
        reduced = nx.partial_trace(m, "second", (d, d))
        if nx.opnorm(reduced - np.eye(d) / d) > COMPLETENESS_TOL:
            raise NotTracePreservingImage("input marginal of the Choi state is not I/d")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "matrix", _frozen(m))


@dataclass(frozen=True, eq=False)
class StinespringDilation:
    """Isometry ``V: C^d -> C^k (x) C^d`` (ancilla-major) implementing a channel."""

    dim: int
    anc_dim: int
    isometry: np.ndarray

    def __post_init__(self):
        v = nx.as_matrix(self.isometry, name="isometry")
        if v.shape != (self.dim * self.anc_dim, self.dim):
            raise DimensionMismatch(
                f"isometry has shape {v.shape}, expected {(self.dim * self.anc_dim, self.dim)}"
            )
        if nx.opnorm(nx.dagger(v) @ v - np.eye(self.dim)) > COMPLETENESS_TOL:
            raise NotIsometry("V^dag V is not the identity")
        object.__setattr__(self, "isometry", _frozen(v))

    def kraus(self, i: int) -> np.ndarray:
        """Block ``(<i|_anc (x) I) V``."""
        d = self.dim
        return self.isometry[i * d:(i + 1) * d, :].copy()

    def to_channel(self) -> KrausChannel:
        return KrausChannel(self.dim, tuple(self.kraus(i) for i in range(self.anc_dim)))

    def unitary(self) -> np.ndarray:
        """Unitary on ancilla (x) system whose action on ``|0>_anc`` is the isometry.

        In ancilla-major order the input ``|0>_anc |psi>`` occupies the first
        ``d`` coordinates, so the isometry fills the first ``d`` columns and the
        rest is a deterministic orthonormal completion.
        """
        return nx.complete_unitary(self.isometry)


def validate(ops: Sequence, dim: int) -> KrausChannel:
    """Check a Kraus list and wrap it, keeping the given order."""
    return KrausChannel(dim, tuple(ops))


def kraus_to_choi(ch: KrausChannel) -> ChoiState:
    d = ch.dim
    k = np.column_stack([vec(op) for op in ch.ops])
    return ChoiState(d, (k @ k.conj().T) / d)


def choi_to_kraus(c: ChoiState) -> KrausChannel:
    """Canonical Kraus set from the spectral decomposition of the Choi state.

    Operator ``i`` is ``sqrt(d * mu_i) * unvec(v_i)``; the set is orthogonal
    with weights ``tr(K_i^dag K_i) = d * mu_i`` in descending order.
    Eigenvalues below ``RANK_CUTOFF`` are dropped.
    """
    d = c.dim
    eig = nx.hermitian_eig(c.matrix)
    ops = [
        np.sqrt(d * mu) * unvec(eig.eigenvectors[:, i], d)
        for i, mu in enumerate(eig.eigenvalues)
        if mu >= RANK_CUTOFF
    ]
    return KrausChannel(d, tuple(ops))


def apply(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    if rho.dim != ch.dim:
        raise DimensionMismatch(f"state dimension {rho.dim} != channel dimension {ch.dim}")
    out = sum(k @ rho.matrix @ nx.dagger(k) for k in ch.ops)
    return DensityMatrix(ch.dim, 0.5 * (out + nx.dagger(out)))


def remix(ch: KrausChannel, u) -> KrausChannel:
    """Kraus set ``K'_i = sum_k u[i, k] K_k`` for an isometry ``u`` (m x n, m >= n)."""
    u = nx.as_matrix(u, name="mixing matrix")
    n = len(ch)
    if u.shape[1] != n:
        raise DimensionMismatch(f"mixing matrix has {u.shape[1]} columns, channel has {n} operators")
    if nx.opnorm(nx.dagger(u) @ u - np.eye(n)) > COMPLETENESS_TOL:
        raise NotIsometry("mixing matrix is not an isometry (u^dag u != I)")
    new = np.tensordot(u, ch.stacked(), axes=(1, 0))
    return KrausChannel(ch.dim, tuple(new))


def orthogonalize(ch: KrausChannel) -> tuple[KrausChannel, np.ndarray]:
    """Diagonalize the Gram matrix to get an orthogonal Kraus set.

    Returns the new channel and the unitary ``mixing`` with
    ``remix(ch, mixing)`` equal to it. Weights ``tr(K_i^dag K_i)`` come out in
    descending order; zero-weight operators are kept so the count is unchanged.
    """
    eig = nx.hermitian_eig(ch.gram())
    # tr(K'_i^dag K'_j) = (conj(u) G u^T)_ij, diagonal for u = V^T
    mixing = eig.eigenvectors.T.copy()
    return remix(ch, mixing), mixing


def dilate(ch: KrausChannel) -> StinespringDilation:
    return StinespringDilation(ch.dim, len(ch), np.vstack(ch.ops))


def random_channel(dim: int, n_kraus: int, seed: int) -> KrausChannel:
    """Seeded random channel from the orthonormalized columns of a Gaussian matrix."""
    if dim < 1 or not 1 <= n_kraus <= dim * dim:
        raise BadArity(f"need 1 <= n_kraus <= dim^2, got dim={dim}, n_kraus={n_kraus}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim * n_kraus, dim)) + 1j * rng.standard_normal((dim * n_kraus, dim))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return StinespringDilation(dim, n_kraus, q).to_channel()


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``rows x cols`` isometry."""
    g = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# Named fixtures used by the tests and the CLI corpus.

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def unitary_channel(u) -> KrausChannel:
    u = nx.as_matrix(u)
    return KrausChannel(u.shape[0], (u,))


def phase_flip(p: float) -> KrausChannel:
    return KrausChannel(2, (np.sqrt(1 - p) * PAULI_I, np.sqrt(p) * PAULI_Z))


def flag_channel(u) -> KrausChannel:
    """Unitary action with a zero first Kraus operator: ``{0, U}``."""
    u = nx.as_matrix(u)
    return KrausChannel(u.shape[0], (np.zeros_like(u), u))


def depolarizing(d: int) -> KrausChannel:
    """Completely depolarizing channel ``rho -> tr(rho) I/d``.

    Uses the Paulis ``{I, X, Y, Z} / 2`` for qubits and the d^2 Weyl operators
    ``X^a Z^b / d`` otherwise.
    """
    if d == 2:
        return KrausChannel(2, tuple(p / 2 for p in (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)))
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    ops = [
        np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b) / d
        for a in range(d)
        for b in range(d)
    ]
    return KrausChannel(d, tuple(ops))
