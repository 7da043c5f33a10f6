"""Dense complex linear algebra with canonical, reproducible output.

Every routine takes and returns plain ``numpy`` arrays and never mutates its
arguments. Eigen- and singular values come back in descending order and each
eigenvector has a fixed phase (largest-magnitude entry real and nonnegative,
ties broken by the lowest row index), so results are stable enough to freeze
into golden tests.
"""

from __future__ import annotations

from typing import Literal, NamedTuple

import numpy as np

from .errors import DimensionMismatch, NonFinite, NotHermitian, NotPsd, NotSquare

HERMITIAN_TOL = 1e-9
PSD_TOL = 1e-10
# Eigenvalues this close to zero (relative) are round-off; their square roots
# would otherwise leak ~1e-8 noise into fidelities.
ZERO_EIG = 1e-12
DEGENERATE_SINGULAR = 1e-12
# Magnitudes within this relative margin of the column maximum count as tied.
_PHASE_TIE = 1e-10


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


class SvdResult(NamedTuple):
    left: np.ndarray
    singulars: np.ndarray
    right: np.ndarray


class PolarResult(NamedTuple):
    stretch: np.ndarray
    unitary: np.ndarray
    degenerate: bool


def as_matrix(a, *, name: str = "matrix") -> np.ndarray:
    """Copy ``a`` into a finite complex 2-D array."""
    m = np.array(a, dtype=complex, copy=True)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite(f"{name} has NaN or Inf entries")
    return m


def _square(a, name: str = "matrix") -> np.ndarray:
    m = as_matrix(a, name=name)
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"{name} must be square, got shape {m.shape}")
    return m


def opnorm(a: np.ndarray) -> float:
    """Operator (spectral) norm."""
    return float(np.linalg.norm(a, 2))


def scale(a: np.ndarray) -> float:
    """Tolerance scale ``max(1, ||a||)`` shared by all hybrid tolerances."""
    return max(1.0, opnorm(a))


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def fix_column_phases(vecs: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real and >= 0."""
    out = np.array(vecs, dtype=complex, copy=True)
    for j in range(out.shape[1]):
        mags = np.abs(out[:, j])
        top = mags.max()
        if top == 0.0:
            continue
        pivot = int(np.flatnonzero(mags >= top * (1.0 - _PHASE_TIE))[0])
        out[:, j] *= np.conj(out[pivot, j]) / mags[pivot]
        out[pivot, j] = mags[pivot]
    return out


def hermitian_eig(a) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    m = _square(a)
    if opnorm(m - dagger(m)) > HERMITIAN_TOL * scale(m):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    m = 0.5 * (m + dagger(m))
    w, v = np.linalg.eigh(m)
    order = np.argsort(-w, kind="stable")
    return HermitianEig(w[order].copy(), fix_column_phases(v[:, order]))


def svd(a) -> SvdResult:
    """Thin SVD ``a = left @ diag(singulars) @ right^dag``, singulars descending.

    Each left singular vector gets the canonical phase; the matching right
    vector absorbs the conjugate rotation so the product is unchanged.
    """
    m = as_matrix(a)
    w, s, xh = np.linalg.svd(m, full_matrices=False)
    x = dagger(xh)
    fixed = fix_column_phases(w)
    # fixed[:, j] = w[:, j] * c_j with |c_j| = 1, so x[:, j] must take the same c_j
    for j in range(w.shape[1]):
        idx = int(np.argmax(np.abs(w[:, j])))
        c = fixed[idx, j] / w[idx, j] if w[idx, j] != 0 else 1.0
        x[:, j] *= c
    return SvdResult(fixed, s.copy(), x)


def polar_unitary(a) -> PolarResult:
    """Left polar decomposition ``a = stretch @ unitary``.

    With ``a = W S X^dag`` the factors are ``stretch = W S W^dag`` (which is
    ``sqrt(a a^dag)``) and ``unitary = W X^dag``. For rank-deficient input the
    unitary is one valid choice among many and ``degenerate`` is set.
    """
    m = _square(a)
    w, s, xh = np.linalg.svd(m)
    stretch = (w * s) @ dagger(w)
    stretch = 0.5 * (stretch + dagger(stretch))
    unitary = w @ xh
    return PolarResult(stretch, unitary, bool(s.min() < DEGENERATE_SINGULAR))


def psd_sqrt(a) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix."""
    eig = hermitian_eig(a)
    m = np.asarray(a, dtype=complex)
    if eig.eigenvalues.min() < -PSD_TOL * scale(m):
        raise NotPsd(f"smallest eigenvalue {eig.eigenvalues.min():.3e} is negative")
    w = eig.eigenvalues.copy()
    w[w < ZERO_EIG * scale(m)] = 0.0
    root = np.sqrt(w)
    v = eig.eigenvectors
    out = (v * root) @ dagger(v)
    return 0.5 * (out + dagger(out))


def partial_trace(
    a, subsystem: Literal["first", "second"], dims: tuple[int, int]
) -> np.ndarray:
    """Trace out one factor of a bipartite operator on ``dims[0] * dims[1]``."""
    m = _square(a)
    d, k = dims
    if d < 1 or k < 1 or d * k != m.shape[0]:
        raise DimensionMismatch(f"dims {dims} do not factor a {m.shape[0]}-dim space")
    t = m.reshape(d, k, d, k)
    if subsystem == "first":
        return np.einsum("ajak->jk", t)
    if subsystem == "second":
        return np.einsum("iaja->ij", t)
    raise ValueError(f"subsystem must be 'first' or 'second', got {subsystem!r}")


def complete_unitary(cols: np.ndarray) -> np.ndarray:
    """Extend orthonormal columns to a full unitary, deterministically.

    The extra columns come from Gram-Schmidt against the standard basis in
    index order, so the completion depends only on ``cols``.
    """
    q = np.array(cols, dtype=complex, copy=True)
    n = q.shape[0]
    basis = [q[:, j] for j in range(q.shape[1])]
    for e in np.eye(n, dtype=complex):
        if len(basis) == n:
            break
        r = e.copy()
        for _ in range(2):
            for b in basis:
                r -= np.vdot(b, r) * b
        nrm = np.linalg.norm(r)
        # some unvisited basis vector always clears 1/sqrt(2n)
        if nrm > 1.0 / np.sqrt(2 * n):
            basis.append(r / nrm)
    return np.column_stack(basis)
