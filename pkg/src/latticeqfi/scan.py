"""Parameter sweeps and feature extraction for QFI studies.

Time series of F and F/T^2, first-peak extraction with parabolic
refinement, (T, U) grids, the interaction optimum U-bar, and mode-number
scaling tables. Grid cells are pure functions of their coordinates, so
sweeps parallelize over columns and assemble deterministically by index.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .evolve import (
    SUBSTEPS_PER_PERIOD,
    driven_trajectory,
    eigensystem,
    make_evolver,
    static_states,
    stroboscopic_hamiltonian,
)
from .fock import DimensionCapError, QuantumState, build_basis, fock_state
from .metrology import (
    QfiSeries,
    generator_parts,
    qfi_finite_difference,
    qfi_from_generator,
    two_level_generator,
)
from .model import ModelParams, build_hamiltonian, d_hamiltonian_d_gamma
from .observe import correlator

STATIC_MODELS = ("tilt", "tbh", "effective", "floquet")
TIME_DEPENDENT_MODELS = ("dbh", "pf")
METHODS = ("finite-difference", "generator", "generator-two-level")

DEFAULT_TIME_POINTS = 400
DEFAULT_U_STEP = 0.04
DEFAULT_U_MAX = 4.0


class InconclusiveScanError(RuntimeError):
    """Every scanned column ended on a boundary; no interior optimum found."""


@dataclass(frozen=True)
class PeakResult:
    """First peak of F/T^2: height, position, and (for U scans) the optimum U."""

    f_max: float
    tau: float
    u_bar: float | None = None
    boundary: bool = False
    provenance: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class ScanGrid:
    """F/T^2 over a (T, U) grid, with optional per-cell diagnostics."""

    t_axis: np.ndarray = field(repr=False)
    u_axis: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    params: ModelParams = None
    model: str = ""
    method: str = ""
    correlators: np.ndarray | None = field(default=None, repr=False)
    var_linear: np.ndarray | None = field(default=None, repr=False)
    var_oscillating: np.ndarray | None = field(default=None, repr=False)


@dataclass(frozen=True)
class ScalingRow:
    m: int
    f_max: float
    tau: float
    ratio_to_m2: float
    ratio_to_hl: float
    boundary: bool
    note: str = ""


def default_time_axis(n_modes: int, points: int = DEFAULT_TIME_POINTS) -> np.ndarray:
    """Default grid: ``points`` samples over (0, 3M/2], excluding t = 0."""
    t_end = 1.5 * n_modes
    return np.linspace(0.0, t_end, points + 1)[1:]


def default_u_axis() -> np.ndarray:
    """Default interaction grid [0, 4] in steps of 0.04."""
    n = round(DEFAULT_U_MAX / DEFAULT_U_STEP)
    return np.linspace(0.0, DEFAULT_U_MAX, n + 1)


def _extend_axis(axis: np.ndarray) -> np.ndarray:
    """Continue a grid past its end with the same spacing, doubling the span."""
    step = axis[-1] - axis[-2]
    extra = axis[-1] + step * np.arange(1, axis.size + 1)
    return np.concatenate([axis, extra])


def _check_axis(axis: np.ndarray, name: str) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    if axis.ndim != 1 or axis.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D grid")
    if axis.size > 1 and np.any(np.diff(axis) <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    return axis


def _static_eigensystem(params: ModelParams, basis, model: str,
                        substeps_per_period: int):
    if model == "floquet":
        h = stroboscopic_hamiltonian(params, basis, substeps_per_period=substeps_per_period)
    else:
        h = build_hamiltonian(model, params, basis)
    return eigensystem(h)


def qfi_time_series(params: ModelParams, psi0: QuantumState, t_axis,
                    method: str = "generator", model: str = "effective",
                    co_vary_omega: bool = False,
                    substeps_per_period: int = SUBSTEPS_PER_PERIOD) -> QfiSeries:
    """QFI and F/T^2 along a time grid.

    The generator methods require a time-independent model (tilt, tbh,
    effective, or floquet); finite differences work for every kind with a
    tilt parameter.
    """
    t_axis = _check_axis(t_axis, "t_axis")
    if np.any(t_axis < 0):
        raise ValueError("t_axis must be non-negative")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if (basis := psi0.basis).n_modes != params.M or basis.n_particles != params.N:
        raise ValueError("initial state basis does not match params")

    qfi = np.empty(t_axis.size)
    var_l = var_o = None
    if method == "finite-difference":
        evolver = make_evolver(model, params, basis, co_vary_omega=co_vary_omega,
                               substeps_per_period=substeps_per_period)
        for k, t in enumerate(t_axis):
            qfi[k] = qfi_finite_difference(evolver, params, psi0, float(t))
    else:
        if model not in STATIC_MODELS:
            raise ValueError(
                f"method {method!r} needs a time-independent model, not {model!r}")
        eig = _static_eigensystem(params, basis, model, substeps_per_period)
        dh = d_hamiltonian_d_gamma(params, basis, model, co_vary_omega=co_vary_omega)
        var_l = np.empty(t_axis.size)
        var_o = np.empty(t_axis.size)
        for k, t in enumerate(t_axis):
            if method == "generator":
                parts = generator_parts(eig, dh, float(t))
            else:
                parts = two_level_generator(eig, psi0, dh, float(t)).parts
            breakdown = qfi_from_generator(psi0, parts)
            qfi[k] = breakdown.qfi
            var_l[k] = breakdown.var_linear
            var_o[k] = breakdown.var_oscillating

    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(t_axis > 0, qfi / np.square(t_axis), 0.0)
    return QfiSeries(times=t_axis, qfi=qfi, qfi_over_t2=scaled, params=params,
                     model=model, method=method, var_linear=var_l, var_oscillating=var_o)


def _parabolic_vertex(x0, x1, x2, y0, y1, y2):
    """Vertex of the parabola through three points; falls back to the middle."""
    num = (x1 - x0) ** 2 * (y1 - y2) - (x1 - x2) ** 2 * (y1 - y0)
    den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0)
    if den == 0:
        return x1, y1
    xv = x1 - 0.5 * num / den
    xv = min(max(xv, x0), x2)
    # Lagrange form of the interpolating parabola, evaluated at the vertex
    yv = (y0 * (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2))
          + y1 * (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2))
          + y2 * (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1)))
    return xv, yv


def find_first_peak(series) -> PeakResult:
    """First interior local maximum of F/T^2, parabolically refined.

    Accepts a QfiSeries or an (times, values) pair. Without an interior
    maximum the boundary point is returned with ``boundary=True``
    (earliest point on ties).
    """
    if isinstance(series, QfiSeries):
        x, y = series.times, series.qfi_over_t2
    else:
        x, y = series
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise ValueError("times and values must have equal length")
    if x.size < 5:
        raise ValueError(f"need at least 5 samples to locate a peak, got {x.size}")
    for i in range(1, x.size - 1):
        if y[i] > y[i - 1] and y[i] >= y[i + 1]:
            tau, f_max = _parabolic_vertex(x[i - 1], x[i], x[i + 1],
                                           y[i - 1], y[i], y[i + 1])
            return PeakResult(
                f_max=float(f_max), tau=float(tau), boundary=False,
                provenance={"grid_points": int(x.size), "bracket_index": i,
                            "grid_start": float(x[0]), "grid_stop": float(x[-1]),
                            "refined": True})
    k = int(np.argmax(y))
    return PeakResult(
        f_max=float(y[k]), tau=float(x[k]), boundary=True,
        provenance={"grid_points": int(x.size), "bracket_index": k,
                    "grid_start": float(x[0]), "grid_stop": float(x[-1]),
                    "refined": False})


def _first_peak_with_extension(params, psi0, t_axis, method, model, co_vary_omega,
                               substeps_per_period):
    """Peak search that widens the window once if the peak sits on the boundary."""
    series = qfi_time_series(params, psi0, t_axis, method, model,
                             co_vary_omega, substeps_per_period)
    peak = find_first_peak(series)
    extended = False
    if peak.boundary and t_axis.size > 1:
        extended = True
        series = qfi_time_series(params, psi0, _extend_axis(t_axis), method, model,
                                 co_vary_omega, substeps_per_period)
        peak = find_first_peak(series)
    if extended:
        prov = dict(peak.provenance)
        prov["extended_once"] = True
        peak = replace(peak, provenance=prov)
    return peak, series


def _scan_column(params, psi0, t_axis, u, method, model, co_vary_omega,
                 substeps_per_period, include_correlator, include_variances):
    p = replace(params, U=float(u))
    series = qfi_time_series(p, psi0, t_axis, method, model,
                             co_vary_omega, substeps_per_period)
    corr = None
    if include_correlator:
        basis = psi0.basis
        if model in STATIC_MODELS:
            eig = _static_eigensystem(p, basis, model, substeps_per_period)
            amps = static_states(None, psi0, t_axis, eig=eig)
        else:
            states = driven_trajectory(p, basis, psi0, t_axis, kind=model,
                                       substeps_per_period=substeps_per_period)
            amps = np.array([s.amplitudes for s in states])
        corr = np.array([correlator(QuantumState(basis, a)) for a in amps])
    return series, corr


def scan_TU(params: ModelParams, psi0: QuantumState, t_axis, u_axis,
            method: str = "generator", model: str = "effective",
            co_vary_omega: bool = False,
            substeps_per_period: int = SUBSTEPS_PER_PERIOD,
            include_correlator: bool = False, include_variances: bool = False,
            workers: int = 1) -> ScanGrid:
    """F/T^2 over the (T, U) product grid; cell (i, j) sits at (T_i, U_j).

    Columns are independent; with ``workers > 1`` they run on a thread pool
    and are merged by index, so results do not depend on scheduling.
    """
    t_axis = _check_axis(t_axis, "t_axis")
    u_axis = _check_axis(u_axis, "u_axis")

    def column(u):
        return _scan_column(params, psi0, t_axis, u, method, model, co_vary_omega,
                            substeps_per_period, include_correlator, include_variances)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(column, u_axis))
    else:
        results = [column(u) for u in u_axis]

    values = np.column_stack([series.qfi_over_t2 for series, _ in results])
    corr = None
    if include_correlator:
        corr = np.column_stack([c for _, c in results])
    var_l = var_o = None
    if include_variances and results[0][0].var_linear is not None:
        var_l = np.column_stack([series.var_linear for series, _ in results])
        var_o = np.column_stack([series.var_oscillating for series, _ in results])
    return ScanGrid(t_axis=t_axis, u_axis=u_axis, values=values, params=params,
                    model=model, method=method, correlators=corr,
                    var_linear=var_l, var_oscillating=var_o)


def ubar_from_grid(grid: ScanGrid) -> PeakResult:
    """U-bar extracted from an existing (T, U) grid, no recomputation.

    Runs the first-peak search down every U column, then refines the argmax
    over U parabolically. Boundary-flagged columns are excluded from the
    argmax; if all columns are boundary-flagged an InconclusiveScanError is
    raised.
    """
    heights = np.empty(grid.u_axis.size)
    taus = np.empty(grid.u_axis.size)
    flags = np.empty(grid.u_axis.size, dtype=bool)
    for k in range(grid.u_axis.size):
        peak = find_first_peak((grid.t_axis, grid.values[:, k]))
        heights[k] = peak.f_max
        taus[k] = peak.tau
        flags[k] = peak.boundary
    if np.all(flags):
        raise InconclusiveScanError(
            "every interaction column peaked on the window boundary; "
            "widen the time window")
    best = int(np.argmax(np.where(flags, -np.inf, heights)))
    if 0 < best < grid.u_axis.size - 1:
        u_bar, f_ref = _parabolic_vertex(
            grid.u_axis[best - 1], grid.u_axis[best], grid.u_axis[best + 1],
            heights[best - 1], heights[best], heights[best + 1])
    else:
        u_bar, f_ref = float(grid.u_axis[best]), float(heights[best])
    return PeakResult(
        f_max=float(f_ref), tau=float(taus[best]), u_bar=float(u_bar),
        boundary=bool(flags[best]),
        provenance={"u_points": int(grid.u_axis.size),
                    "u_start": float(grid.u_axis[0]), "u_stop": float(grid.u_axis[-1]),
                    "t_points": int(grid.t_axis.size), "t_stop": float(grid.t_axis[-1]),
                    "argmax_index": best, "boundary_columns": int(np.sum(flags))})


def find_Ubar(params: ModelParams, psi0: QuantumState, u_axis=None, t_window=None,
              method: str = "generator", model: str = "effective",
              co_vary_omega: bool = False,
              substeps_per_period: int = SUBSTEPS_PER_PERIOD) -> PeakResult:
    """Interaction strength maximizing the first-peak height of F/T^2.

    Extracts the first peak for every U on the grid, then refines the
    argmax parabolically on the U grid. Raises InconclusiveScanError when
    every column is boundary-flagged even after the one-time window
    extension.
    """
    u_axis = default_u_axis() if u_axis is None else _check_axis(u_axis, "u_axis")
    t_window = default_time_axis(params.M) if t_window is None \
        else _check_axis(t_window, "t_window")

    heights = np.empty(u_axis.size)
    taus = np.empty(u_axis.size)
    flags = np.empty(u_axis.size, dtype=bool)
    for k, u in enumerate(u_axis):
        peak, _ = _first_peak_with_extension(replace(params, U=float(u)), psi0,
                                             t_window, method, model,
                                             co_vary_omega, substeps_per_period)
        heights[k] = peak.f_max
        taus[k] = peak.tau
        flags[k] = peak.boundary
    if np.all(flags):
        raise InconclusiveScanError(
            "every interaction column peaked on the window boundary; "
            "widen the time window")
    best = int(np.argmax(np.where(flags, -np.inf, heights)))
    if 0 < best < u_axis.size - 1:
        u_bar, f_ref = _parabolic_vertex(u_axis[best - 1], u_axis[best], u_axis[best + 1],
                                         heights[best - 1], heights[best], heights[best + 1])
    else:
        u_bar, f_ref = float(u_axis[best]), float(heights[best])
    return PeakResult(
        f_max=float(f_ref), tau=float(taus[best]), u_bar=float(u_bar),
        boundary=bool(flags[best]),
        provenance={"u_points": int(u_axis.size), "u_start": float(u_axis[0]),
                    "u_stop": float(u_axis[-1]), "t_points": int(t_window.size),
                    "t_stop": float(t_window[-1]), "argmax_index": best,
                    "boundary_columns": int(np.sum(flags))})


def scaling_study(n_particles: int, m_values, params: ModelParams,
                  method: str = "generator", model: str = "effective",
                  points: int = DEFAULT_TIME_POINTS,
                  substeps_per_period: int = SUBSTEPS_PER_PERIOD) -> list:
    """Peak height and time versus mode count, from a Fock start.

    Each row carries the first-peak F/T^2 and tau, the ratio to the M = 2
    reference (computed even when 2 is absent from ``m_values``), and the
    fraction of the Heisenberg limit (N (M - 1))^2. Rows whose basis would
    exceed the dimension cap are reported with a note and NaNs; the
    remaining rows still compute.
    """
    m_values = sorted(int(m) for m in m_values)
    if any(m < 2 for m in m_values):
        raise ValueError("mode counts must be >= 2")

    def peak_for(m: int) -> PeakResult:
        basis = build_basis(n_particles, m)
        p = replace(params, M=m, N=n_particles)
        occupations = (n_particles,) + (0,) * (m - 1)
        psi0 = fock_state(basis, occupations)
        peak, _ = _first_peak_with_extension(p, psi0, default_time_axis(m, points),
                                             method, model, False, substeps_per_period)
        return peak

    ref = peak_for(2)
    rows = []
    for m in m_values:
        try:
            peak = ref if m == 2 else peak_for(m)
        except DimensionCapError as exc:
            rows.append(ScalingRow(m=m, f_max=float("nan"), tau=float("nan"),
                                   ratio_to_m2=float("nan"), ratio_to_hl=float("nan"),
                                   boundary=False, note=str(exc)))
            continue
        hl_per_t2 = float(n_particles * (m - 1)) ** 2
        rows.append(ScalingRow(m=m, f_max=peak.f_max, tau=peak.tau,
                               ratio_to_m2=peak.f_max / ref.f_max,
                               ratio_to_hl=peak.f_max / hl_per_t2,
                               boundary=peak.boundary))
    return rows
