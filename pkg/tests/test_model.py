import math
from dataclasses import replace

import numpy as np
import pytest

from latticeqfi.fock import build_basis, fock_state
from latticeqfi.model import (
    ModelParams,
    d_hamiltonian_d_gamma,
    dbh_hamiltonian_at,
    drive_phases,
    effective_hamiltonian,
    micromotion_phases,
    pf_hamiltonian_at,
    renormalized_tunneling,
    tbh_hamiltonian,
    tilt_hamiltonian,
)


def bessel_j1_series(x: float) -> float:
    """Independent oracle: ascending series sum_k (-1)^k (x/2)^(1+2k) / (k! (k+1)!)."""
    total = 0.0
    term_base = x / 2.0
    for k in range(60):
        term = (-1) ** k * term_base ** (1 + 2 * k) / (math.factorial(k) * math.factorial(k + 1))
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            break
    return total


def test_renormalized_tunneling_matches_series_oracle():
    params = ModelParams(M=3, N=3)  # V0 = 30.4, omega = 33
    x = 2 * 30.4 / 33.0
    expected = 1.0 * bessel_j1_series(x)
    assert renormalized_tunneling(params) == pytest.approx(expected, rel=1e-12)


def test_zero_drive_amplitude_kills_tunneling():
    basis = build_basis(2, 3)
    params = ModelParams(M=3, N=2, V0=0.0)
    assert renormalized_tunneling(params) == 0.0
    mat = effective_hamiltonian(params, basis).matrix
    assert np.allclose(mat, np.diag(np.diag(mat)))


@pytest.fixture
def basis33():
    return build_basis(3, 3)


def test_tilt_diagonal_entries(basis33):
    params = ModelParams(M=3, N=3, gamma=2.5)
    mat = tilt_hamiltonian(params, basis33).matrix
    assert np.allclose(mat, np.diag(np.diag(mat)))
    assert mat[basis33.index_of((0, 3, 0)), basis33.index_of((0, 3, 0))] == pytest.approx(6 * 2.5)
    assert mat[basis33.index_of((3, 0, 0)), basis33.index_of((3, 0, 0))] == pytest.approx(3 * 2.5)
    assert mat[basis33.index_of((0, 0, 3)), basis33.index_of((0, 0, 3))] == pytest.approx(9 * 2.5)


def test_tbh_single_hop_element():
    basis = build_basis(1, 2)
    params = ModelParams(M=2, N=1, J=1.0, gamma=0.7)
    mat = tbh_hamiltonian(params, basis).matrix
    i, j = basis.index_of((0, 1)), basis.index_of((1, 0))
    assert mat[i, j] == pytest.approx(-1.0)


def test_tbh_interaction_diagonal():
    basis = build_basis(2, 2)
    params = ModelParams(M=2, N=2, gamma=1.1, U=0.8)
    mat = tbh_hamiltonian(params, basis).matrix
    k = basis.index_of((2, 0))
    # tilt 2*gamma plus U/2 * 2 * 1 = U
    assert mat[k, k] == pytest.approx(2 * 1.1 + 0.8)


def test_tbh_without_hopping_and_interaction_is_tilt(basis33):
    params = ModelParams(M=3, N=3, J=0.0, U=0.0, gamma=1.9)
    assert np.array_equal(tbh_hamiltonian(params, basis33).matrix,
                          tilt_hamiltonian(params, basis33).matrix)


def test_tbh_affine_in_gamma_u_j(basis33):
    base = ModelParams(M=3, N=3, J=1.3, gamma=2.0, U=0.9)
    for name, (v1, v2) in [("gamma", (0.7, 1.6)), ("U", (0.4, 1.1)), ("J", (0.5, 1.2))]:
        h0 = tbh_hamiltonian(replace(base, **{name: 0.0}), basis33).matrix
        h1 = tbh_hamiltonian(replace(base, **{name: v1}), basis33).matrix
        h2 = tbh_hamiltonian(replace(base, **{name: v2}), basis33).matrix
        h12 = tbh_hamiltonian(replace(base, **{name: v1 + v2}), basis33).matrix
        assert np.max(np.abs(h1 + h2 - h0 - h12)) <= 1e-13


def test_dbh_reduces_to_tbh_at_t0(basis33):
    # theta = pi, phi0 = -pi/2 make the drive vanish at t = 0
    params = ModelParams(M=3, N=3, U=0.5)
    dbh = dbh_hamiltonian_at(params, basis33, 0.0)
    tbh = tbh_hamiltonian(params, basis33)
    assert np.max(np.abs(dbh.matrix - tbh.matrix)) <= 1e-12


def test_dbh_periodicity(basis33):
    params = ModelParams(M=3, N=3, U=1.0)
    t = 0.123
    h1 = dbh_hamiltonian_at(params, basis33, t).matrix
    h2 = dbh_hamiltonian_at(params, basis33, t + 2 * math.pi / params.omega).matrix
    assert np.max(np.abs(h1 - h2)) <= 1e-10


def test_dbh_hermitian_at_random_times(basis33):
    params = ModelParams(M=3, N=3, U=0.7)
    rng = np.random.default_rng(7)
    for t in rng.uniform(0, 2 * math.pi / params.omega, size=5):
        mat = dbh_hamiltonian_at(params, basis33, float(t)).matrix
        assert np.max(np.abs(mat - mat.conj().T)) <= 1e-12


def test_dbh_period_average_is_tbh(basis33):
    """Midpoint average over one drive period removes the sinusoid."""
    params = ModelParams(M=3, N=3, U=0.6)
    period = 2 * math.pi / params.omega
    nodes = 1000
    acc = np.zeros((basis33.dim, basis33.dim), dtype=complex)
    for k in range(nodes):
        acc += dbh_hamiltonian_at(params, basis33, (k + 0.5) * period / nodes).matrix
    acc /= nodes
    assert np.max(np.abs(acc - tbh_hamiltonian(params, basis33).matrix)) <= 1e-8


def test_effective_two_site_single_particle_eigenvalues():
    basis = build_basis(1, 2)
    params = ModelParams(M=2, N=1, U=0.0, K=0.0)
    jf = renormalized_tunneling(params)
    evals = np.linalg.eigvalsh(effective_hamiltonian(params, basis).matrix)
    assert evals == pytest.approx([-abs(jf), abs(jf)], rel=1e-12)


def test_effective_k_term_is_boundary_density(basis33):
    params = ModelParams(M=3, N=3, K=0.7)
    with_k = effective_hamiltonian(params, basis33).matrix
    without_k = effective_hamiltonian(replace(params, K=0.0), basis33).matrix
    diff = np.diag(with_k - without_k).real
    occ = basis33.occupations
    expected = (0.7 / params.omega) * (occ[:, -1] - occ[:, 0])
    assert np.allclose(diff, expected)


def test_pf_forcing_vanishes_at_quarter_period(basis33):
    params = ModelParams(M=3, N=3, Gamma=2.2, U=0.4)
    t = math.pi / (2 * params.omega)
    h = pf_hamiltonian_at(params, basis33, t).matrix
    h0 = tbh_hamiltonian(replace(params, gamma=0.0), basis33).matrix
    assert np.max(np.abs(h - h0)) <= 1e-12


def test_pf_forcing_is_tilt_at_t0(basis33):
    params = ModelParams(M=3, N=3, Gamma=2.2)
    h = pf_hamiltonian_at(params, basis33, 0.0).matrix
    expected = tbh_hamiltonian(replace(params, gamma=0.0), basis33).matrix \
        + tilt_hamiltonian(replace(params, gamma=2.2), basis33).matrix
    assert np.max(np.abs(h - expected)) <= 1e-12


def test_builders_commute_with_particle_number(basis33):
    # fixed-N sector: every builder must be block diagonal in N by construction,
    # equivalently commute with N * identity exactly
    params = ModelParams(M=3, N=3, U=0.8, Gamma=1.0)
    total = 3 * np.eye(basis33.dim)
    for mat in [tbh_hamiltonian(params, basis33).matrix,
                dbh_hamiltonian_at(params, basis33, 0.31).matrix,
                effective_hamiltonian(params, basis33).matrix,
                pf_hamiltonian_at(params, basis33, 0.17).matrix]:
        comm = mat @ total - total @ mat
        assert np.max(np.abs(comm)) <= 1e-12


def test_d_gamma_diagonal_for_plain_kinds(basis33):
    params = ModelParams(M=3, N=3)
    for kind in ("tilt", "tbh", "dbh", "effective", "floquet"):
        mat = d_hamiltonian_d_gamma(params, basis33, kind).matrix
        k = basis33.index_of((0, 3, 0))
        assert mat[k, k] == pytest.approx(6.0)
        assert np.allclose(mat, np.diag(np.diag(mat)))


def test_d_gamma_matches_tbh_linearity(basis33):
    params = ModelParams(M=3, N=3, gamma=1.2, U=0.3)
    delta = 0.37
    h1 = tbh_hamiltonian(params, basis33).matrix
    h2 = tbh_hamiltonian(replace(params, gamma=params.gamma + delta), basis33).matrix
    slope = d_hamiltonian_d_gamma(params, basis33, "tbh").matrix
    assert np.max(np.abs(h2 - h1 - delta * slope)) <= 1e-12


def test_d_gamma_covary_matches_finite_difference(basis33):
    """Central-difference oracle on the omega = gamma family of matrices."""
    params = ModelParams(M=3, N=3, gamma=33.0, K=0.8)
    delta = 1e-4 * params.gamma

    def family(gamma):
        return effective_hamiltonian(replace(params, gamma=gamma, omega=gamma),
                                     basis33).matrix

    fd = (family(params.gamma + delta) - family(params.gamma - delta)) / (2 * delta)
    analytic = d_hamiltonian_d_gamma(params, basis33, "effective",
                                     co_vary_omega=True).matrix
    assert np.max(np.abs(fd - analytic)) <= 1e-8


def test_d_gamma_unknown_kind(basis33):
    with pytest.raises(ValueError):
        d_hamiltonian_d_gamma(ModelParams(M=3, N=3), basis33, "pf")


def test_drive_phases_recursion():
    params = ModelParams(M=4, N=1)
    phases = drive_phases(params)
    assert phases[0] == pytest.approx(params.phi0 - math.pi)
    assert np.allclose(np.diff(phases), -math.pi)


def test_micromotion_phases_are_unit_modulus(basis33):
    phases = micromotion_phases(ModelParams(M=3, N=3), basis33)
    assert np.allclose(np.abs(phases), 1.0)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(M=1, N=1)
    with pytest.raises(ValueError):
        ModelParams(M=2, N=0)
    with pytest.raises(ValueError):
        ModelParams(M=2, N=1, J=-0.5)
    with pytest.raises(ValueError):
        ModelParams(M=2, N=1, gamma=float("inf"))
    basis = build_basis(1, 2)
    with pytest.raises(ValueError):
        dbh_hamiltonian_at(ModelParams(M=2, N=1, omega=0.0), basis, 0.0)
    with pytest.raises(ValueError):
        effective_hamiltonian(ModelParams(M=2, N=1, omega=-3.0), basis)


def test_basis_params_mismatch():
    basis = build_basis(2, 3)
    with pytest.raises(ValueError):
        tilt_hamiltonian(ModelParams(M=3, N=3), basis)
