import math

import numpy as np
import pytest

from latticeqfi.fock import QuantumState, build_basis, fock_state, noon_state
from latticeqfi.model import ModelParams, effective_hamiltonian, tilt_hamiltonian
from latticeqfi.evolve import EigenSystem, eigensystem, evolve_static
from latticeqfi.observe import (
    correlator,
    dominant_pair,
    eigenstate_overlaps,
    occupations,
    spectral_gap_tau,
)


def correlator_brute_force(psi: QuantumState) -> float:
    """Oracle: explicit amplitude summation of <(a^dag_M a_1)^N> / (N!/2).

    (a^dag_M a_1)^N connects v to v - N e_1 + N e_M with weight
    sqrt(v_1! / (v_1 - N)!) * sqrt((v_M + N)! / v_M!).
    """
    basis = psi.basis
    n = basis.n_particles
    total = 0.0 + 0.0j
    for col, state in enumerate(basis.states):
        if state[0] < n:
            continue
        target = list(state)
        target[0] -= n
        target[-1] += n
        row = basis.index[tuple(target)]
        weight = math.sqrt(math.factorial(state[0]) / math.factorial(state[0] - n))
        weight *= math.sqrt(math.factorial(state[-1] + n) / math.factorial(state[-1]))
        total += np.conj(psi.amplitudes[row]) * weight * psi.amplitudes[col]
    return abs(total) / (math.factorial(n) / 2.0)


def random_quantum_state(basis, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    return QuantumState(basis, v / np.linalg.norm(v))


@pytest.mark.parametrize("n, m", [(1, 2), (2, 3), (3, 3), (2, 4)])
def test_correlator_matches_brute_force_on_random_states(n, m):
    basis = build_basis(n, m)
    for seed in (0, 1, 2):
        psi = random_quantum_state(basis, seed)
        assert correlator(psi) == pytest.approx(correlator_brute_force(psi), abs=1e-12)


def test_correlator_noon_is_one_under_frozen_dynamics():
    basis = build_basis(3, 3)
    params = ModelParams(M=3, N=3, J=0.0, gamma=1.4)
    h = tilt_hamiltonian(params, basis)
    eig = eigensystem(h)
    psi0 = noon_state(basis)
    for t in np.linspace(0.0, 6.0, 25):
        psi = evolve_static(h, psi0, float(t), eig=eig)
        assert correlator(psi) == pytest.approx(1.0, abs=1e-10)


def test_correlator_fock_state_is_zero():
    basis = build_basis(3, 3)
    assert correlator(fock_state(basis, (3, 0, 0))) == 0.0


def test_correlator_stays_bounded_on_evolved_states():
    basis = build_basis(3, 3)
    psi0 = fock_state(basis, (3, 0, 0))
    for u in (0.0, 1.0, 1.92, 3.0):
        params = ModelParams(M=3, N=3, U=u)
        h = effective_hamiltonian(params, basis)
        eig = eigensystem(h)
        for t in np.linspace(0.2, 12.0, 20):
            value = correlator(evolve_static(h, psi0, float(t), eig=eig))
            assert -1e-12 <= value <= 1.0 + 1e-9


def test_occupations_basic():
    basis = build_basis(3, 3)
    assert np.allclose(occupations(fock_state(basis, (3, 0, 0))), [3, 0, 0])
    basis22 = build_basis(2, 2)
    assert np.allclose(occupations(noon_state(basis22)), [1, 1])


def test_occupations_conserved_along_evolution():
    basis = build_basis(2, 3)
    params = ModelParams(M=3, N=2, U=0.7)
    h = effective_hamiltonian(params, basis)
    eig = eigensystem(h)
    psi0 = fock_state(basis, (2, 0, 0))
    for t in (0.3, 1.9, 6.4):
        occ = occupations(evolve_static(h, psi0, t, eig=eig))
        assert occ.sum() == pytest.approx(2.0, abs=1e-9)


def test_overlaps_indicator_for_eigenvector():
    basis = build_basis(2, 2)
    params = ModelParams(M=2, N=2, U=0.6)
    eig = eigensystem(effective_hamiltonian(params, basis))
    psi0 = QuantumState(basis, eig.vectors[:, 1])
    overlaps = eigenstate_overlaps(psi0, eig)
    expected = np.zeros(basis.dim)
    expected[1] = 1.0
    assert np.allclose(overlaps, expected, atol=1e-12)


def test_overlaps_sum_to_one():
    basis = build_basis(3, 3)
    eig = eigensystem(effective_hamiltonian(ModelParams(M=3, N=3, U=1.1), basis))
    for seed in (3, 4):
        psi = random_quantum_state(basis, seed)
        assert eigenstate_overlaps(psi, eig).sum() == pytest.approx(1.0, abs=1e-10)


def test_overlaps_invariant_under_vector_phases():
    basis = build_basis(2, 3)
    eig = eigensystem(effective_hamiltonian(ModelParams(M=3, N=2, U=0.9), basis))
    psi = random_quantum_state(basis, 9)
    rng = np.random.default_rng(10)
    rotated = EigenSystem(
        energies=eig.energies,
        vectors=eig.vectors * np.exp(1j * rng.uniform(0, 2 * np.pi, size=eig.dim)),
    )
    assert np.allclose(eigenstate_overlaps(psi, eig),
                       eigenstate_overlaps(psi, rotated), atol=1e-12)


def test_dominant_pair_tie_breaks_to_lower_index():
    eig = EigenSystem(energies=np.array([0.0, 1.0, 2.0, 3.0]),
                      vectors=np.eye(4, dtype=complex))
    overlaps = np.array([0.25, 0.25, 0.25, 0.25])
    a, b, tied = dominant_pair(eig, overlaps)
    assert (a, b) == (0, 1)
    assert tied


def test_spectral_gap_tau_two_level():
    eig = EigenSystem(energies=np.array([0.0, math.pi]),
                      vectors=np.eye(2, dtype=complex))
    gap, tau = spectral_gap_tau(eig, np.array([0.6, 0.4]))
    assert gap == pytest.approx(math.pi)
    assert tau == pytest.approx(1.0)


def test_spectral_gap_tau_degenerate_error():
    eig = EigenSystem(energies=np.array([1.0, 1.0, 3.0]),
                      vectors=np.eye(3, dtype=complex))
    with pytest.raises(ValueError):
        spectral_gap_tau(eig, np.array([0.5, 0.5, 0.0]))
