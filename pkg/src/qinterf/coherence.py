"""Coherence metrics for channels and channel pairs.

Two kinds of quantity live here. Some depend on the Kraus decomposition as
given: :func:`coherent_fidelity`, :func:`self_visibility` and
:func:`closest_unitary`, which only look at the first Kraus operator. Others
are maxima over all decompositions and so depend only on the channel:
:func:`max_self_coherence`, :func:`max_coherent_fidelity` and
:func:`raginsky_fidelity`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics as nx
from .channels import KrausChannel, kraus_to_choi, orthogonalize, remix, vec
from .errors import DimensionMismatch, NumericError
from .interferometer import wrap_phase

DEGENERATE = 1e-12
ACHIEVED_TOL = 1e-10


@dataclass(frozen=True)
class CoherenceReport:
    fidelity: float
    phase: float
    degenerate: bool


@dataclass(frozen=True, eq=False)
class ClosestUnitaryReport:
    unitary: np.ndarray
    visibility: float
    degenerate: bool


@dataclass(frozen=True, eq=False)
class SelfCoherence:
    v_max: float
    realizing: KrausChannel

    def __iter__(self):
        return iter((self.v_max, self.realizing))


@dataclass(frozen=True, eq=False)
class MaxFidelityReport:
    """Best achievable coherent fidelity between two channels.

    ``g0`` and ``h0`` are the first rows of the mixing unitaries applied to the
    orthogonal Kraus sets of U and V; ``realizing_u`` and ``realizing_v`` are
    the resulting decompositions, whose first operators attain ``max_fidelity``.
    """

    max_fidelity: float
    g0: np.ndarray
    h0: np.ndarray
    overlap_matrix: np.ndarray
    degenerate: bool
    realizing_u: KrausChannel = field(repr=False)
    realizing_v: KrausChannel = field(repr=False)


def _same_dim(chU: KrausChannel, chV: KrausChannel) -> int:
    if chU.dim != chV.dim:
        raise DimensionMismatch(f"channel dimensions differ: {chU.dim} vs {chV.dim}")
    return chU.dim


def coherent_fidelity(chU: KrausChannel, chV: KrausChannel) -> CoherenceReport:
    d = _same_dim(chU, chV)
    t = complex(np.trace(nx.dagger(chU.first) @ chV.first))
    f = abs(t) / d
    if f < DEGENERATE:
        return CoherenceReport(f, 0.0, True)
    return CoherenceReport(f, wrap_phase(np.angle(t)), False)


def self_visibility(ch: KrausChannel) -> float:
    k = ch.first
    return float(np.real(np.vdot(k, k))) / ch.dim


def max_self_coherence(ch: KrausChannel) -> SelfCoherence:
    """Largest self-visibility over all Kraus decompositions of ``ch``.

    The maximum is the top eigenvalue of the Gram matrix divided by ``d``; the
    orthogonal decomposition puts that weight on the first operator.
    """
    realizing, _ = orthogonalize(ch)
    v_max = self_visibility(realizing)
    top = nx.hermitian_eig(ch.gram()).eigenvalues[0] / ch.dim
    if abs(v_max - top) > ACHIEVED_TOL:
        raise NumericError(f"orthogonal decomposition reaches {v_max!r}, Gram bound is {top!r}")
    return SelfCoherence(v_max, realizing)


def closest_unitary(ch: KrausChannel) -> ClosestUnitaryReport:
    """Unitary arm operation that maximizes interference with ``ch``.

    For ``K0 = sqrt(K0 K0^dag) W`` the maximizer of ``|tr(K0^dag U)|`` is
    ``U = W``, giving visibility ``tr sqrt(K0^dag K0) / d``. Only the first
    Kraus operator as given is used.
    """
    k0 = ch.first
    d = ch.dim
    if not np.any(k0):
        return ClosestUnitaryReport(np.eye(d, dtype=complex), 0.0, True)
    polar = nx.polar_unitary(k0)
    vis = float(np.sum(np.linalg.svd(k0, compute_uv=False))) / d
    return ClosestUnitaryReport(polar.unitary, vis, polar.degenerate)


def _mixing_with_first_row(row: np.ndarray) -> np.ndarray:
    q = nx.complete_unitary(np.conj(row).reshape(-1, 1))
    return nx.dagger(q)


def max_coherent_fidelity(chU: KrausChannel, chV: KrausChannel) -> MaxFidelityReport:
    """Maximize ``|tr(U_0'^dag V_0')| / d`` over decompositions of both channels.

    With orthogonal Kraus sets and ``A[i, j] = tr(U_i^dag V_j)`` the objective
    is ``|g^dag A h| / d`` for unit vectors ``g`` and ``h``, which peaks at the
    largest singular value of ``A``: ``g0`` is the top left singular vector and
    ``h0 = A^dag g0 / ||A^dag g0||``.
    """
    d = _same_dim(chU, chV)
    ortho_u, mix_u = orthogonalize(chU)
    ortho_v, mix_v = orthogonalize(chV)
    ku = np.array([vec(k) for k in ortho_u.ops])
    kv = np.array([vec(k) for k in ortho_v.ops])
    a = ku.conj() @ kv.T

    dec = nx.svd(a)
    sigma = float(dec.singulars[0])
    g0 = dec.left[:, 0].copy()
    img = nx.dagger(a) @ g0
    degenerate = sigma < DEGENERATE
    if degenerate:
        h0 = np.zeros(a.shape[1], dtype=complex)
        h0[0] = 1.0
    else:
        h0 = img / np.linalg.norm(img)

    real_u = remix(chU, _mixing_with_first_row(g0) @ mix_u)
    real_v = remix(chV, _mixing_with_first_row(h0) @ mix_v)
    achieved = abs(np.trace(nx.dagger(real_u.first) @ real_v.first)) / d
    if abs(achieved - sigma / d) > ACHIEVED_TOL:
        raise NumericError(f"realized fidelity {achieved!r} misses sigma_max/d = {sigma / d!r}")
    return MaxFidelityReport(sigma / d, g0, h0, a, degenerate, real_u, real_v)


def raginsky_fidelity(chU: KrausChannel, chV: KrausChannel) -> float:
    """``tr sqrt(sqrt(rho_U) rho_V sqrt(rho_U))`` on the Choi states (not squared)."""
    _same_dim(chU, chV)
    ru = kraus_to_choi(chU).matrix
    rv = kraus_to_choi(chV).matrix
    s = nx.psd_sqrt(ru)
    inner = s @ rv @ s
    return float(np.real(np.trace(nx.psd_sqrt(0.5 * (inner + nx.dagger(inner))))))
