"""Quantum Fisher information for tilted, driven, and Floquet-effective Bose-Hubbard chains."""

from .fock import (
    DimensionCapError,
    FockBasis,
    HermitianOperator,
    QuantumState,
    basis_dimension,
    build_basis,
    fock_state,
    hop_operator,
    noon_state,
    number_operator,
)
from .model import (
    ModelParams,
    build_hamiltonian,
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
from .evolve import (
    EigenSystem,
    eigensystem,
    evolve_driven,
    evolve_static,
    driven_trajectory,
    make_evolver,
    one_period_propagator,
    static_states,
    stroboscopic_hamiltonian,
)
from .metrology import (
    GeneratorParts,
    QfiBreakdown,
    QfiConvergenceWarning,
    QfiSeries,
    TwoLevelGenerator,
    cramer_rao,
    generator_parts,
    heisenberg_limit,
    optimal_qfi,
    qfi_finite_difference,
    qfi_from_generator,
    two_level_generator,
)
from .observe import (
    correlator,
    dominant_pair,
    eigenstate_overlaps,
    occupations,
    spectral_gap_tau,
)
from .scan import (
    InconclusiveScanError,
    PeakResult,
    ScalingRow,
    ScanGrid,
    default_time_axis,
    default_u_axis,
    find_first_peak,
    find_Ubar,
    qfi_time_series,
    scaling_study,
    scan_TU,
    ubar_from_grid,
)

__version__ = "0.1.0"
