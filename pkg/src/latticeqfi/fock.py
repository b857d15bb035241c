"""Bosonic Fock basis and second-quantized operators for N particles on M modes.

The basis spans the fixed-particle-number sector of M bosonic modes: all
occupation vectors (n_1, ..., n_M) with sum N. States are ordered descending
lexicographically, so |N,0,...,0> always sits at index 0 and |0,...,0,N> last.
Site labels are 1-based in the public API; storage is 0-based.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

DEFAULT_DIM_CAP = 5000
DIM_CAP_ENV = "LATTICEQFI_DIM_CAP"

NORM_TOL = 1e-10
HERMITICITY_TOL = 1e-12


class DimensionCapError(ValueError):
    """The requested basis would exceed the configured dimension cap."""


def basis_dimension(n_particles: int, n_modes: int) -> int:
    """Number of occupation states, binomial(N + M - 1, N) (stars and bars)."""
    return math.comb(n_particles + n_modes - 1, n_particles)


def _occupations_desc(total: int, modes: int):
    """Yield occupation tuples summing to `total`, descending lexicographic."""
    if modes == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _occupations_desc(total - head, modes - 1):
            yield (head,) + tail


@dataclass(frozen=True, eq=False)
class FockBasis:
    """Fixed-(N, M) bosonic occupation basis with index lookup.

    Attributes
    ----------
    n_particles, n_modes : int
        Particle number N and mode count M.
    states : tuple of occupation tuples
        Descending lexicographic; ``states[index[v]] == v``.
    index : dict
        Occupation tuple -> position in ``states``.
    occupations : (dim, M) int array
        Row k is ``states[k]``; handy for vectorized diagonal operators.
    """

    n_particles: int
    n_modes: int
    states: tuple
    index: dict
    occupations: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def index_of(self, occupations) -> int:
        """Position of an occupation vector; raises ValueError if not a member."""
        key = tuple(int(n) for n in occupations)
        try:
            return self.index[key]
        except KeyError:
            raise ValueError(
                f"occupation vector {key} is not in the (N={self.n_particles}, "
                f"M={self.n_modes}) basis"
            ) from None

    def same_sector(self, other: "FockBasis") -> bool:
        return (self.n_particles, self.n_modes) == (other.n_particles, other.n_modes)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Normalized complex amplitude vector over a FockBasis."""

    basis: FockBasis
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.basis.dim,):
            raise ValueError(
                f"amplitude vector of shape {amps.shape} does not match basis "
                f"dimension {self.basis.dim}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def overlap(self, other: "QuantumState") -> complex:
        """Inner product <self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "QuantumState") -> float:
        """|<self|other>|^2."""
        return abs(self.overlap(other)) ** 2


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense complex matrix on a FockBasis, Hermitian within tolerance."""

    basis: FockBasis
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128)
        dim = self.basis.dim
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not match basis dimension {dim}")
        dev = np.max(np.abs(mat - mat.conj().T))
        if dev > HERMITICITY_TOL * max(1.0, np.max(np.abs(mat))):
            raise ValueError(f"matrix is not Hermitian: max|H - H^dag| = {dev:.3e}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


def as_matrix(op) -> np.ndarray:
    """Unwrap a HermitianOperator, or pass an ndarray through."""
    if isinstance(op, HermitianOperator):
        return op.matrix
    return np.asarray(op)


def _resolve_dim_cap(dim_cap) -> int:
    if dim_cap is not None:
        return int(dim_cap)
    env = os.environ.get(DIM_CAP_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{DIM_CAP_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_DIM_CAP


def build_basis(n_particles: int, n_modes: int, dim_cap: int | None = None) -> FockBasis:
    """Enumerate the N-particle, M-mode occupation basis.

    Parameters
    ----------
    n_particles : int
        N >= 1.
    n_modes : int
        M >= 2.
    dim_cap : int, optional
        Hilbert-space dimension cap. Defaults to the LATTICEQFI_DIM_CAP
        environment variable, else 5000.
    """
    if n_particles < 1:
        raise ValueError(f"need at least one particle, got N={n_particles}")
    if n_modes < 2:
        raise ValueError(f"need at least two modes, got M={n_modes}")
    cap = _resolve_dim_cap(dim_cap)
    dim = basis_dimension(n_particles, n_modes)
    if dim > cap:
        raise DimensionCapError(
            f"basis for (N={n_particles}, M={n_modes}) has dimension {dim}, "
            f"above the cap {cap}"
        )
    states = tuple(_occupations_desc(n_particles, n_modes))
    index = {state: k for k, state in enumerate(states)}
    occ = np.array(states, dtype=np.int64)
    occ.setflags(write=False)
    return FockBasis(n_particles=n_particles, n_modes=n_modes, states=states,
                     index=index, occupations=occ)


def _check_site(basis: FockBasis, site: int, name: str) -> None:
    if not 1 <= site <= basis.n_modes:
        raise ValueError(f"site {name}={site} out of range 1..{basis.n_modes}")


def hop_operator(basis: FockBasis, i: int, j: int) -> np.ndarray:
    """Matrix of a^dag_i a_j with 1-based sites i, j.

    Matrix element <v'| a^dag_i a_j |v> = sqrt(v_j (v_i + 1)) where v' is v
    with one particle moved j -> i. For i == j this is the diagonal number
    operator n_i. Hermitian only when i == j.
    """
    _check_site(basis, i, "i")
    _check_site(basis, j, "j")
    dim = basis.dim
    mat = np.zeros((dim, dim))
    if i == j:
        np.fill_diagonal(mat, basis.occupations[:, i - 1].astype(float))
        return mat
    for col, state in enumerate(basis.states):
        nj = state[j - 1]
        if nj == 0:
            continue
        moved = list(state)
        moved[j - 1] -= 1
        moved[i - 1] += 1
        row = basis.index[tuple(moved)]
        mat[row, col] = math.sqrt(nj * (state[i - 1] + 1))
    return mat


def number_operator(basis: FockBasis, j: int) -> np.ndarray:
    """Diagonal number operator n_j (1-based site)."""
    return hop_operator(basis, j, j)


def fock_state(basis: FockBasis, occupations) -> QuantumState:
    """Unit amplitude on one occupation vector."""
    amps = np.zeros(basis.dim, dtype=np.complex128)
    amps[basis.index_of(occupations)] = 1.0
    return QuantumState(basis, amps)


def noon_state(basis: FockBasis) -> QuantumState:
    """(|N,0,...,0> + |0,...,0,N>) / sqrt(2)."""
    left = [0] * basis.n_modes
    left[0] = basis.n_particles
    right = [0] * basis.n_modes
    right[-1] = basis.n_particles
    amps = np.zeros(basis.dim, dtype=np.complex128)
    amps[basis.index_of(left)] = 1.0 / math.sqrt(2.0)
    amps[basis.index_of(right)] = 1.0 / math.sqrt(2.0)
    return QuantumState(basis, amps)
