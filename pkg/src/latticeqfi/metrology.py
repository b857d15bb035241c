"""Quantum Fisher information of pure states under tilt estimation.

Three routes are provided:

* finite differences of the evolved state,
  F = 4 (<d_g psi|d_g psi> - |<psi|d_g psi>|^2),
* the local generator of a time-independent Hamiltonian family, split into
  a linear part (Hellmann-Feynman energy shifts) and an oscillating part
  built from eigenvector derivatives, with F = 4 Var(h) over the initial
  state,
* a two-level truncation of the oscillating part restricted to the
  eigenpair carrying the largest initial-state overlaps.

All generators here act on the *initial* state: the generator is
h = i U^dag (d_gamma U), whose eigenbasis matrix elements are
h_kl = 2 exp(+i t E_kl / 2) sin(t E_kl / 2) <phi_k|dH|phi_l> / E_kl for
k != l and t <dH>_kk on the diagonal, E_kl = E_k - E_l. The combination is
finite as E_kl -> 0, where the coefficient tends to t.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .evolve import EigenSystem
from .fock import QuantumState, as_matrix
from .model import ModelParams
from .observe import dominant_pair, eigenstate_overlaps

FD_STEP_SCALE = 1e-5
RICHARDSON_RTOL = 1e-4


class QfiConvergenceWarning(UserWarning):
    """Finite-difference QFI failed its step-halving consistency check."""


@dataclass(frozen=True, eq=False)
class GeneratorParts:
    """Linear and oscillating parts of the local generator at time t."""

    linear: np.ndarray = field(repr=False)
    oscillating: np.ndarray = field(repr=False)
    t: float = 0.0

    @property
    def total(self) -> np.ndarray:
        return self.linear + self.oscillating


@dataclass(frozen=True, eq=False)
class TwoLevelGenerator:
    """Generator with the oscillating part truncated to a dominant eigenpair."""

    parts: GeneratorParts
    pair: tuple
    pair_overlaps: tuple
    omega_gap: float
    tau_estimate: float
    tie_flagged: bool


@dataclass(frozen=True, eq=False)
class QfiSeries:
    """Time-resolved QFI data with its provenance.

    ``qfi_over_t2[k]`` is ``qfi[k] / times[k]**2``, defined as 0 at t = 0.
    """

    times: np.ndarray = field(repr=False)
    qfi: np.ndarray = field(repr=False)
    qfi_over_t2: np.ndarray = field(repr=False)
    params: ModelParams = None
    model: str = ""
    method: str = ""
    var_linear: np.ndarray | None = field(default=None, repr=False)
    var_oscillating: np.ndarray | None = field(default=None, repr=False)


class QfiBreakdown(NamedTuple):
    qfi: float
    var_linear: float
    var_oscillating: float


def _variance(psi: np.ndarray, hermitian: np.ndarray) -> float:
    w = hermitian @ psi
    mean = float(np.vdot(psi, w).real)
    return float(np.vdot(w, w).real) - mean * mean


def _fd_qfi_once(evolver: Callable, gamma0: float, psi0: QuantumState,
                 total_time: float, delta: float) -> float:
    if gamma0 + delta == gamma0 or gamma0 - delta == gamma0:
        raise ValueError(
            f"finite-difference step {delta} underflows at gamma = {gamma0}; "
            "increase dgamma")
    center = evolver(gamma0, psi0, total_time).amplitudes
    plus = evolver(gamma0 + delta, psi0, total_time).amplitudes
    minus = evolver(gamma0 - delta, psi0, total_time).amplitudes
    dpsi = (plus - minus) / (2.0 * delta)
    return 4.0 * (float(np.vdot(dpsi, dpsi).real) - abs(np.vdot(center, dpsi)) ** 2)


def qfi_finite_difference(evolver: Callable, params: ModelParams, psi0: QuantumState,
                          total_time: float, dgamma: float | None = None) -> float:
    """QFI from central differences of the evolved state over gamma.

    The derivative uses steps dgamma and dgamma/2; the two estimates must
    agree to a relative 1e-4 or a QfiConvergenceWarning is attached. The
    half-step estimate is returned. The default step is
    1e-5 * max(1, |gamma|).
    """
    gamma0 = params.gamma
    if dgamma is None:
        delta = FD_STEP_SCALE * max(1.0, abs(gamma0))
    else:
        if not dgamma > 0:
            raise ValueError(f"dgamma must be positive, got {dgamma}")
        delta = float(dgamma)
    coarse = _fd_qfi_once(evolver, gamma0, psi0, total_time, delta)
    fine = _fd_qfi_once(evolver, gamma0, psi0, total_time, 0.5 * delta)
    tol = RICHARDSON_RTOL * max(abs(fine), abs(coarse)) + 1e-10
    if abs(fine - coarse) > tol:
        warnings.warn(
            f"finite-difference QFI at T={total_time} did not converge: "
            f"F({delta:g}) = {coarse:.6e} vs F({0.5 * delta:g}) = {fine:.6e}",
            QfiConvergenceWarning,
            stacklevel=2,
        )
    return fine


def generator_parts(eig: EigenSystem, d_hamiltonian, t: float,
                    degeneracy_threshold: float | None = None) -> GeneratorParts:
    """Local generator of exp(-i H(gamma) t) split into its two parts.

    ``linear`` is t * sum_k <phi_k|dH|phi_k> |phi_k><phi_k| (Hellmann-
    Feynman). ``oscillating`` carries the eigenvector derivatives
    <phi_l|dH|phi_k>/(E_k - E_l); pairs with |E_k - E_l| below the
    degeneracy threshold (default 1e-10 * max|E|) use the analytic limit in
    which the off-diagonal coefficient equals t.
    """
    dh = as_matrix(d_hamiltonian)
    if dh.shape != (eig.dim, eig.dim):
        raise ValueError(
            f"derivative matrix shape {dh.shape} does not match eigensystem "
            f"dimension {eig.dim}")
    energies = eig.energies
    vectors = eig.vectors
    if degeneracy_threshold is None:
        degeneracy_threshold = 1e-10 * max(1.0, float(np.max(np.abs(energies))))
    w = vectors.conj().T @ dh @ vectors
    gaps = energies[:, None] - energies[None, :]
    degenerate = np.abs(gaps) < degeneracy_threshold
    safe = np.where(degenerate, 1.0, gaps)
    coeff = 2.0 * np.exp(0.5j * t * gaps) * np.sin(0.5 * t * gaps) / safe
    coeff = np.where(degenerate, t, coeff)
    np.fill_diagonal(coeff, 0.0)
    linear_eig = t * np.real(np.diag(w))
    linear = (vectors * linear_eig) @ vectors.conj().T
    oscillating = vectors @ (coeff * w) @ vectors.conj().T
    return GeneratorParts(linear=linear, oscillating=oscillating, t=t)


def qfi_from_generator(psi0: QuantumState, parts: GeneratorParts) -> QfiBreakdown:
    """F = 4 Var(linear + oscillating) over psi0, plus the per-part variances."""
    psi = psi0.amplitudes if isinstance(psi0, QuantumState) else np.asarray(psi0)
    if psi.shape != (parts.linear.shape[0],):
        raise ValueError("state and generator dimensions do not match")
    return QfiBreakdown(
        qfi=4.0 * _variance(psi, parts.total),
        var_linear=_variance(psi, parts.linear),
        var_oscillating=_variance(psi, parts.oscillating),
    )


def optimal_qfi(generator) -> float:
    """(h_max - h_min)^2 from the extreme eigenvalues of the full generator."""
    if isinstance(generator, GeneratorParts):
        mat = generator.total
    else:
        mat = as_matrix(generator)
    evals = np.linalg.eigvalsh(mat)
    return float((evals[-1] - evals[0]) ** 2)


def heisenberg_limit(n_particles: int, n_modes: int, total_time: float) -> float:
    """F_HL = T^2 (N (M - 1))^2."""
    if n_particles < 1 or n_modes < 2:
        raise ValueError(f"need N >= 1 and M >= 2, got N={n_particles}, M={n_modes}")
    if total_time < 0:
        raise ValueError(f"time must be non-negative, got {total_time}")
    return float((total_time * n_particles * (n_modes - 1)) ** 2)


def two_level_generator(eig: EigenSystem, psi0: QuantumState, d_hamiltonian,
                        t: float) -> TwoLevelGenerator:
    """Generator with the oscillating part restricted to the dominant pair.

    The pair is the two eigenvectors with the largest overlaps
    |<phi_k|psi0>|^2; the oscillating part keeps only the 2x2 block on that
    pair while the linear part stays complete. Also reports the pair gap
    Omega = |E_a - E_b| and the peak-time estimate tau = pi / Omega.
    """
    if eig.dim < 3:
        raise ValueError(f"two-level truncation needs dimension >= 3, got {eig.dim}")
    overlaps = eigenstate_overlaps(psi0, eig)
    a, b, tied = dominant_pair(eig, overlaps)
    full = generator_parts(eig, d_hamiltonian, t)
    w = eig.vectors.conj().T @ full.oscillating @ eig.vectors
    trunc = np.zeros_like(w)
    trunc[a, b] = w[a, b]
    trunc[b, a] = w[b, a]
    oscillating = eig.vectors @ trunc @ eig.vectors.conj().T
    gap = abs(float(eig.energies[a] - eig.energies[b]))
    tau = math.pi / gap if gap > 0 else math.inf
    return TwoLevelGenerator(
        parts=GeneratorParts(linear=full.linear, oscillating=oscillating, t=t),
        pair=(int(a), int(b)),
        pair_overlaps=(float(overlaps[a]), float(overlaps[b])),
        omega_gap=gap,
        tau_estimate=tau,
        tie_flagged=tied,
    )


def cramer_rao(qfi: float, repetitions: int = 1) -> float:
    """Quantum Cramer-Rao bound 1 / sqrt(nu * F)."""
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    if not qfi > 0:
        raise ValueError(f"QFI must be positive for a finite bound, got {qfi}")
    return 1.0 / math.sqrt(repetitions * qfi)
