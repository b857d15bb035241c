"""Correlation and occupation diagnostics.

The N-particle end-to-end correlator is
G = |<psi| (a^dag_M a_1)^N |psi>| / (N!/2); the normalization N!/2 makes it
exactly 1 for a generalized NOON state at all times under frozen dynamics.
"""

from __future__ import annotations

import math

import numpy as np

from .evolve import EigenSystem
from .fock import QuantumState, hop_operator

OVERLAP_TIE_TOL = 1e-12


def correlator(psi: QuantumState) -> float:
    """End-to-end N-particle correlator of a normalized state.

    Computed by N successive applications of a^dag_M a_1 to the state
    (cost N * dim^2) rather than materializing the N-th operator power.
    """
    basis = psi.basis
    hop = hop_operator(basis, basis.n_modes, 1)
    vec = np.array(psi.amplitudes)
    for _ in range(basis.n_particles):
        vec = hop @ vec
    norm = math.factorial(basis.n_particles) / 2.0
    return float(abs(np.vdot(psi.amplitudes, vec)) / norm)


def occupations(psi: QuantumState) -> np.ndarray:
    """Site occupations <n_j>, j = 1..M; sums to N for a normalized state."""
    weights = np.abs(psi.amplitudes) ** 2
    return weights @ psi.basis.occupations.astype(float)


def eigenstate_overlaps(psi0: QuantumState, eig: EigenSystem) -> np.ndarray:
    """|<phi_k|psi0>|^2 indexed by ascending energy; sums to 1."""
    psi = psi0.amplitudes if isinstance(psi0, QuantumState) else np.asarray(psi0)
    if psi.shape != (eig.dim,):
        raise ValueError(
            f"state dimension {psi.shape} does not match eigensystem dimension {eig.dim}")
    return np.abs(eig.vectors.conj().T @ psi) ** 2


def dominant_pair(eig: EigenSystem, overlaps: np.ndarray,
                  tie_tol: float = OVERLAP_TIE_TOL) -> tuple:
    """Indices of the two largest overlaps, ranked, plus a tie flag.

    Ties within ``tie_tol`` break deterministically toward the lower energy
    index (stable sort); the flag marks an ambiguous selection boundary
    between the second- and third-ranked overlaps.
    """
    overlaps = np.asarray(overlaps, dtype=float)
    if overlaps.size < 2:
        raise ValueError("need at least two eigenstates to pick a pair")
    order = np.argsort(-overlaps, kind="stable")
    a, b = int(order[0]), int(order[1])
    tied = False
    if overlaps.size >= 3:
        tied = abs(overlaps[order[1]] - overlaps[order[2]]) < tie_tol
    return a, b, tied


def spectral_gap_tau(eig: EigenSystem, overlaps: np.ndarray) -> tuple:
    """Gap Omega of the two highest-overlap eigenstates and tau = pi / Omega."""
    if eig.dim < 2:
        raise ValueError("need at least a two-dimensional spectrum")
    a, b, _ = dominant_pair(eig, overlaps)
    gap = abs(float(eig.energies[a] - eig.energies[b]))
    scale = max(1.0, float(np.max(np.abs(eig.energies))))
    if gap < 1e-14 * scale:
        raise ValueError(
            f"dominant pair is degenerate (|E_a - E_b| = {gap:.3e}); "
            "tau = pi/Omega is undefined")
    return gap, math.pi / gap
