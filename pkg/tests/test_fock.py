import math

import numpy as np
import pytest

from latticeqfi.fock import (
    DimensionCapError,
    HermitianOperator,
    QuantumState,
    basis_dimension,
    build_basis,
    fock_state,
    hop_operator,
    noon_state,
    number_operator,
)


def test_single_particle_two_modes():
    basis = build_basis(1, 2)
    assert basis.dim == 2
    assert basis.states == ((1, 0), (0, 1))


@pytest.mark.parametrize("n, m, dim", [(3, 3, 10), (7, 4, 120), (1, 2, 2), (4, 5, 70)])
def test_dimension_stars_and_bars(n, m, dim):
    assert basis_dimension(n, m) == dim
    assert build_basis(n, m).dim == dim


def test_states_sum_to_n_and_ordering():
    basis = build_basis(4, 3)
    for state in basis.states:
        assert sum(state) == 4
        assert all(n >= 0 for n in state)
    # descending lexicographic: |N,0,...,0> first, |0,...,0,N> last
    assert basis.states[0] == (4, 0, 0)
    assert basis.states[-1] == (0, 0, 4)
    assert list(basis.states) == sorted(basis.states, reverse=True)


def test_index_roundtrip():
    basis = build_basis(3, 4)
    for k, state in enumerate(basis.states):
        assert basis.index_of(state) == k


def test_domain_errors():
    with pytest.raises(ValueError):
        build_basis(0, 3)
    with pytest.raises(ValueError):
        build_basis(2, 1)


def test_dimension_cap_names_offenders():
    with pytest.raises(DimensionCapError) as err:
        build_basis(10, 10, dim_cap=100)
    assert "N=10" in str(err.value) and "M=10" in str(err.value)


def test_dimension_cap_env_override(monkeypatch):
    monkeypatch.setenv("LATTICEQFI_DIM_CAP", "5")
    with pytest.raises(DimensionCapError):
        build_basis(3, 3)
    monkeypatch.setenv("LATTICEQFI_DIM_CAP", "10")
    assert build_basis(3, 3).dim == 10


def test_number_operator_on_stacked_state():
    basis = build_basis(3, 3)
    vec = fock_state(basis, (3, 0, 0)).amplitudes
    n1 = number_operator(basis, 1)
    assert np.allclose(n1 @ vec, 3 * vec)


def test_hop_bosonic_factor():
    basis = build_basis(2, 2)
    hop = hop_operator(basis, 2, 1)  # a^dag_2 a_1
    vec = hop @ fock_state(basis, (2, 0)).amplitudes
    expected = math.sqrt(2) * fock_state(basis, (1, 1)).amplitudes
    assert np.allclose(vec, expected)


def test_hop_annihilates_empty_mode():
    basis = build_basis(1, 2)
    hop = hop_operator(basis, 1, 2)  # a^dag_1 a_2 on |1,0>
    assert np.allclose(hop @ fock_state(basis, (1, 0)).amplitudes, 0.0)


def test_hop_adjoint_pairs():
    basis = build_basis(3, 3)
    for i in range(1, 4):
        for j in range(1, 4):
            a = hop_operator(basis, i, j)
            b = hop_operator(basis, j, i)
            assert np.max(np.abs(a - b.conj().T)) <= 1e-14


def test_hop_site_out_of_range():
    basis = build_basis(2, 3)
    with pytest.raises(ValueError):
        hop_operator(basis, 0, 1)
    with pytest.raises(ValueError):
        hop_operator(basis, 1, 4)


def test_total_number_is_n_identity():
    basis = build_basis(3, 4)
    total = sum(number_operator(basis, j) for j in range(1, 5))
    assert np.array_equal(total, 3 * np.eye(basis.dim))


def test_fock_state_placement():
    basis = build_basis(3, 3)
    state = fock_state(basis, (3, 0, 0))
    assert state.amplitudes[basis.index_of((3, 0, 0))] == 1.0
    assert np.count_nonzero(state.amplitudes) == 1
    state = fock_state(build_basis(1, 2), (0, 1))
    assert state.amplitudes[1] == 1.0


def test_fock_state_rejects_bad_occupation():
    basis = build_basis(2, 2)
    with pytest.raises(ValueError):
        fock_state(basis, (1, 2))  # sums to 3, not 2


@pytest.mark.parametrize("n, m", [(2, 2), (1, 2), (3, 4), (2, 5)])
def test_noon_state(n, m):
    basis = build_basis(n, m)
    state = noon_state(basis)
    left = [0] * m
    left[0] = n
    right = [0] * m
    right[-1] = n
    assert state.amplitudes[basis.index_of(left)] == pytest.approx(1 / math.sqrt(2))
    assert state.amplitudes[basis.index_of(right)] == pytest.approx(1 / math.sqrt(2))
    assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-12)


def test_quantum_state_requires_normalization():
    basis = build_basis(1, 2)
    with pytest.raises(ValueError):
        QuantumState(basis, np.array([1.0, 1.0]))


def test_hermitian_operator_rejects_non_hermitian():
    basis = build_basis(1, 2)
    with pytest.raises(ValueError):
        HermitianOperator(basis, np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_states_are_immutable():
    basis = build_basis(2, 2)
    state = noon_state(basis)
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0.0
    with pytest.raises(ValueError):
        basis.occupations[0, 0] = 7
