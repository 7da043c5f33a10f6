"""Mach-Zehnder interferometer with a channel in each arm.

The lower path (|0>) carries channel V, the upper path (|1>) carries U and the
adjustable phase ``exp(i phi)``. Both beamsplitters are Hadamards. With
``z = tr(U_0^dag V_0 rho)`` built from the first Kraus operators, the
probability of leaving through port 0 is

    P0(phi) = (1 + |z| cos(phi - arg z)) / 2

so the fringe shift is ``alpha = arg z`` and the visibility is ``|z|``.
:func:`simulate_pattern_dilated` rebuilds the same curve by brute force in
the full path (x) system (x) E (x) F space and serves as the oracle for
:func:`simulate_pattern`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from .channels import DensityMatrix, KrausChannel, StinespringDilation
from .errors import (
    BadSampleCount,
    DimensionMismatch,
    NonUniformGrid,
    NotUnitary,
    TooFewSamples,
    ValidationError,
)

DEFAULT_SAMPLES = 64
GRID_TOL = 1e-12
PROB_TOL = 1e-12
DEGENERATE_VIS = 1e-12
UNITARY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class InterferencePattern:
    phases: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        phases = np.array(self.phases, dtype=float)
        probs = np.array(self.probabilities, dtype=float)
        if phases.ndim != 1 or phases.shape != probs.shape:
            raise ValidationError("phases and probabilities must be 1-D and equally long")
        if phases.size < 3:
            raise TooFewSamples(f"a pattern needs at least 3 samples, got {phases.size}")
        if np.any(probs < -PROB_TOL) or np.any(probs > 1 + PROB_TOL):
            raise ValidationError("probabilities must lie in [0, 1]")
        phases.flags.writeable = False
        probs.flags.writeable = False
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "probabilities", probs)

    def __len__(self) -> int:
        return self.phases.size


@dataclass(frozen=True)
class VisibilityEstimate:
    v: float
    alpha: float
    degenerate: bool


def phase_grid(n: int) -> np.ndarray:
    if n < 3:
        raise BadSampleCount(f"n_samples must be >= 3, got {n}")
    return 2 * np.pi * np.arange(n) / n


def wrap_phase(a: float) -> float:
    """Map an angle into (-pi, pi]."""
    a = float(np.angle(np.exp(1j * a)))
    return np.pi if a <= -np.pi else a


def _check_pair(chU: KrausChannel, chV: KrausChannel, rho: DensityMatrix | None = None):
    if chU.dim != chV.dim:
        raise DimensionMismatch(f"arm dimensions differ: {chU.dim} vs {chV.dim}")
    if rho is not None and rho.dim != chU.dim:
        raise DimensionMismatch(f"state dimension {rho.dim} != channel dimension {chU.dim}")


def complex_visibility(chU: KrausChannel, chV: KrausChannel, rho: DensityMatrix) -> complex:
    """``tr(U_0^dag V_0 rho)`` for the arms' first Kraus operators."""
    _check_pair(chU, chV, rho)
    return complex(np.trace(nx.dagger(chU.first) @ chV.first @ rho.matrix))


def pattern_from_visibility(z: complex, n_samples: int = DEFAULT_SAMPLES) -> InterferencePattern:
    phi = phase_grid(n_samples)
    p0 = 0.5 * (1.0 + np.real(np.exp(1j * phi) * np.conj(z)))
    return InterferencePattern(phi, p0)


def simulate_pattern(
    chU: KrausChannel, chV: KrausChannel, rho: DensityMatrix, n_samples: int = DEFAULT_SAMPLES
) -> InterferencePattern:
    if n_samples < 3:
        raise BadSampleCount(f"n_samples must be >= 3, got {n_samples}")
    return pattern_from_visibility(complex_visibility(chU, chV, rho), n_samples)


def _arm_operator(w: np.ndarray, d: int, k_own: int, k_other: int, own_is_e: bool) -> np.ndarray:
    """Lift an (ancilla-major) dilation unitary to system (x) E (x) F."""
    t = w.reshape(k_own, d, k_own, d)
    eye = np.eye(k_other)
    if own_is_e:
        # out (a', e', f'), in (a, e, f)
        full = np.einsum("xpya,gf->pxgayf", t, eye)
    else:
        full = np.einsum("xpya,ge->pgxaey", t, eye)
    n = d * k_own * k_other
    return full.reshape(n, n)


def simulate_pattern_dilated(
    dU: StinespringDilation,
    dV: StinespringDilation,
    rho: DensityMatrix,
    n_samples: int = DEFAULT_SAMPLES,
) -> InterferencePattern:
    """Full unitary simulation of the interferometer on path (x) system (x) E (x) F.

    U acts on system (x) F and V on system (x) E, each through a unitary
    completion of its dilation with the ancilla prepared in |0>. The whole
    density matrix is evolved, so the result is exact for mixed ``rho``.
    """
    if dU.dim != dV.dim:
        raise DimensionMismatch(f"arm dimensions differ: {dU.dim} vs {dV.dim}")
    if rho.dim != dU.dim:
        raise DimensionMismatch(f"state dimension {rho.dim} != channel dimension {dU.dim}")
    phi = phase_grid(n_samples)
    d, k_e, k_f = dU.dim, dV.anc_dim, dU.anc_dim

    big_v = _arm_operator(dV.unitary(), d, k_e, k_f, own_is_e=True)
    big_u = _arm_operator(dU.unitary(), d, k_f, k_e, own_is_e=False)
    inner = d * k_e * k_f

    anc0 = np.zeros((k_e * k_f, k_e * k_f))
    anc0[0, 0] = 1.0
    path0 = np.diag([1.0, 0.0])
    state = np.kron(path0, np.kron(rho.matrix, anc0))

    had = np.kron(np.array([[1, 1], [1, -1]]) / np.sqrt(2), np.eye(inner))
    port0 = np.kron(path0, np.eye(inner))
    split = had @ state @ had

    probs = np.empty(n_samples)
    for i, p in enumerate(phi):
        arms = np.zeros((2 * inner, 2 * inner), dtype=complex)
        arms[:inner, :inner] = big_v
        arms[inner:, inner:] = np.exp(1j * p) * big_u
        step = had @ arms
        out = step @ split @ nx.dagger(step)
        probs[i] = np.real(np.trace(port0 @ out))
    return InterferencePattern(phi, probs)


def extract_visibility(p: InterferencePattern) -> VisibilityEstimate:
    """Fit ``(1 + v cos(phi - alpha)) / 2`` from the first harmonic of the samples.

    Exact for a noiseless single-cosine pattern on a uniform grid covering
    one full period.
    """
    n = len(p)
    if n < 3:
        raise TooFewSamples(f"need at least 3 samples, got {n}")
    step = 2 * np.pi / n
    if np.any(np.abs(np.diff(p.phases) - step) > GRID_TOL):
        raise NonUniformGrid(f"phases must be spaced by 2*pi/{n}")
    c = 2.0 / n * np.sum((2 * p.probabilities - 1) * np.exp(-1j * p.phases))
    v = float(np.abs(c))
    if v < DEGENERATE_VIS:
        return VisibilityEstimate(v=v, alpha=0.0, degenerate=True)
    return VisibilityEstimate(v=min(v, 1.0), alpha=wrap_phase(-np.angle(c)), degenerate=False)


def unitary_distance(u, v) -> float:
    """Squared Hilbert-Schmidt distance ``2 (d - Re tr(U^dag V))`` of two unitaries."""
    u = nx.as_matrix(u, name="U")
    v = nx.as_matrix(v, name="V")
    if u.shape != v.shape or u.shape[0] != u.shape[1]:
        raise DimensionMismatch(f"shapes {u.shape} and {v.shape} are not matching squares")
    d = u.shape[0]
    for name, m in (("U", u), ("V", v)):
        if nx.opnorm(nx.dagger(m) @ m - np.eye(d)) > UNITARY_TOL:
            raise NotUnitary(f"{name} is not unitary")
    return max(0.0, 2.0 * (d - float(np.real(np.trace(nx.dagger(u) @ v)))))
