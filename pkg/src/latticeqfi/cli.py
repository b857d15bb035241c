"""Command-line front end: JSON run configs in, CSV/JSON results out.

Subcommands: evolve, qfi, scan, scaling, spectrum. Configs are parsed
strictly (unknown keys are fatal), outputs are deterministic byte-for-byte
for identical configs, and every file carries a provenance header with the
tool version and the SHA-256 of the canonical config. Exit codes: 0 ok,
2 config error, 3 numerical error, 4 dimension-cap error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .evolve import (
    SUBSTEPS_PER_PERIOD,
    driven_trajectory,
    eigensystem,
    static_states,
    stroboscopic_hamiltonian,
)
from .fock import DimensionCapError, QuantumState, build_basis, fock_state, noon_state
from .metrology import two_level_generator
from .model import MODEL_KINDS, ModelParams, build_hamiltonian, d_hamiltonian_d_gamma
from .observe import correlator, dominant_pair, eigenstate_overlaps, occupations
from .scan import (
    STATIC_MODELS,
    InconclusiveScanError,
    find_first_peak,
    qfi_time_series,
    scaling_study,
    scan_TU,
    ubar_from_grid,
)

CLI_MODELS = ("tilt", "tbh", "dbh", "effective", "floquet", "pf")
CLI_METHODS = ("finite-difference", "generator", "generator-two-level")

_PARAM_KEYS = ("J", "gamma", "U", "V0", "omega", "theta", "phi0", "K", "Gamma", "M", "N")
_GRID_KEYS = ("start", "stop", "points")
_TOP_KEYS = ("model", "initial_state", "method", "co_vary_omega", "params",
             "time_grid", "u_grid", "m_values", "drive_substeps", "output_prefix")


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class RunConfig:
    model: str
    initial_state: object
    method: str
    co_vary_omega: bool
    params: ModelParams
    time_grid: np.ndarray | None
    u_grid: np.ndarray | None
    m_values: list | None
    drive_substeps: int
    output_prefix: str
    raw: dict = field(repr=False, default_factory=dict)


def _reject_unknown(mapping: dict, allowed, where: str) -> None:
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"unknown config key {key!r} in {where}")


def _parse_grid(spec, where: str) -> np.ndarray:
    if not isinstance(spec, dict):
        raise ConfigError(f"{where} must be an object with start/stop/points")
    _reject_unknown(spec, _GRID_KEYS, where)
    for key in _GRID_KEYS:
        if key not in spec:
            raise ConfigError(f"{where} is missing {key!r}")
    start, stop, points = spec["start"], spec["stop"], spec["points"]
    if not isinstance(points, int) or points < 1:
        raise ConfigError(f"{where}.points must be a positive integer")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise ConfigError(f"{where} bounds must be finite")
    if points > 1 and stop <= start:
        raise ConfigError(f"{where} needs stop > start")
    return np.linspace(float(start), float(stop), points)


def load_config(path: str) -> RunConfig:
    """Parse and validate a JSON run config; unknown keys are fatal."""
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    _reject_unknown(raw, _TOP_KEYS, "config")

    model = raw.get("model", "effective")
    if model not in CLI_MODELS:
        raise ConfigError(f"unknown model {model!r}; expected one of {CLI_MODELS}")
    method = raw.get("method", "generator")
    if method not in CLI_METHODS:
        raise ConfigError(f"unknown method {method!r}; expected one of {CLI_METHODS}")
    co_vary = raw.get("co_vary_omega", False)
    if not isinstance(co_vary, bool):
        raise ConfigError("co_vary_omega must be a boolean")

    params_spec = raw.get("params")
    if not isinstance(params_spec, dict):
        raise ConfigError("config needs a 'params' object")
    _reject_unknown(params_spec, _PARAM_KEYS, "params")
    for key in ("M", "N"):
        if key not in params_spec:
            raise ConfigError(f"params is missing {key!r}")
        if not isinstance(params_spec[key], int):
            raise ConfigError(f"params.{key} must be an integer")
    numeric = {k: v for k, v in params_spec.items()}
    for key, value in numeric.items():
        if key in ("M", "N"):
            continue
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"params.{key} must be a number")
    try:
        params = ModelParams(**numeric)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    state_spec = raw.get("initial_state", "fock")
    if isinstance(state_spec, str):
        if state_spec not in ("fock", "noon"):
            raise ConfigError(
                f"initial_state must be 'fock', 'noon', or an occupation list, "
                f"got {state_spec!r}")
    elif isinstance(state_spec, list):
        if not all(isinstance(n, int) and n >= 0 for n in state_spec):
            raise ConfigError("explicit initial_state must be a list of non-negative integers")
    else:
        raise ConfigError("initial_state must be a string or a list")

    time_grid = _parse_grid(raw["time_grid"], "time_grid") if "time_grid" in raw else None
    u_grid = _parse_grid(raw["u_grid"], "u_grid") if "u_grid" in raw else None

    m_values = raw.get("m_values")
    if m_values is not None:
        if (not isinstance(m_values, list) or not m_values
                or not all(isinstance(m, int) and m >= 2 for m in m_values)):
            raise ConfigError("m_values must be a non-empty list of integers >= 2")

    substeps = raw.get("drive_substeps", SUBSTEPS_PER_PERIOD)
    if not isinstance(substeps, int) or substeps < 1:
        raise ConfigError("drive_substeps must be a positive integer")

    prefix = raw.get("output_prefix", "run")
    if not isinstance(prefix, str) or not prefix:
        raise ConfigError("output_prefix must be a non-empty string")

    return RunConfig(model=model, initial_state=state_spec, method=method,
                     co_vary_omega=co_vary, params=params, time_grid=time_grid,
                     u_grid=u_grid, m_values=m_values, drive_substeps=substeps,
                     output_prefix=prefix, raw=raw)


def _config_hash(raw: dict) -> str:
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _initial_state(config: RunConfig, basis) -> QuantumState:
    spec = config.initial_state
    if spec == "fock":
        occ = (basis.n_particles,) + (0,) * (basis.n_modes - 1)
        return fock_state(basis, occ)
    if spec == "noon":
        return noon_state(basis)
    try:
        return fock_state(basis, spec)
    except ValueError as exc:
        raise ConfigError(f"initial_state {spec} is invalid: {exc}") from exc


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.12g}"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".latticeqfi-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path: str, header: list, rows, config: RunConfig) -> None:
    lines = [
        f"# latticeqfi {__version__}",
        f"# config-sha256: {_config_hash(config.raw)}",
        f"# model: {config.model}  method: {config.method}",
        ",".join(header),
    ]
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _write_summary(path: str, config: RunConfig, results: dict) -> None:
    doc = {
        "tool": "latticeqfi",
        "version": __version__,
        "config_sha256": _config_hash(config.raw),
        "config": config.raw,
        "results": results,
    }
    _atomic_write(path, json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _write_plot_script(csv_path: str, columns: str, title: str) -> None:
    script = "\n".join([
        "set datafile separator ','",
        "set datafile commentschars '#'",
        f"set title '{title}'",
        "set key autotitle columnhead",
        f"plot '{os.path.basename(csv_path)}' using {columns} with lines",
        "pause -1",
    ]) + "\n"
    _atomic_write(csv_path + ".gp", script)


def _require(config: RunConfig, attr: str, command: str):
    value = getattr(config, attr)
    if value is None:
        raise ConfigError(f"command {command!r} requires {attr!r} in the config")
    return value


def cmd_evolve(config: RunConfig, outdir: str, threads: int, emit_plot: bool) -> None:
    times = _require(config, "time_grid", "evolve")
    basis = build_basis(config.params.N, config.params.M)
    psi0 = _initial_state(config, basis)
    if config.model in STATIC_MODELS:
        if config.model == "floquet":
            ham = stroboscopic_hamiltonian(config.params, basis,
                                           substeps_per_period=config.drive_substeps)
        else:
            ham = build_hamiltonian(config.model, config.params, basis)
        amps = static_states(ham, psi0, times)
        states = [QuantumState(basis, a) for a in amps]
    else:
        states = driven_trajectory(config.params, basis, psi0, times, kind=config.model,
                                   substeps_per_period=config.drive_substeps)
    header = ["t"] + [f"n{j}" for j in range(1, basis.n_modes + 1)] + ["norm", "G"]
    rows = []
    for t, state in zip(times, states):
        occ = occupations(state)
        rows.append([t, *occ, float(np.linalg.norm(state.amplitudes)), correlator(state)])
    csv_path = os.path.join(outdir, f"{config.output_prefix}_evolve.csv")
    _write_csv(csv_path, header, rows, config)
    if emit_plot:
        _write_plot_script(csv_path, "1:2", "site occupations")


def cmd_qfi(config: RunConfig, outdir: str, threads: int, emit_plot: bool) -> None:
    times = _require(config, "time_grid", "qfi")
    basis = build_basis(config.params.N, config.params.M)
    psi0 = _initial_state(config, basis)
    series = qfi_time_series(config.params, psi0, times, method=config.method,
                             model=config.model, co_vary_omega=config.co_vary_omega,
                             substeps_per_period=config.drive_substeps)
    header = ["T", "F", "F_over_T2"]
    columns = [series.times, series.qfi, series.qfi_over_t2]
    if series.var_linear is not None:
        header += ["var_linear", "var_oscillating"]
        columns += [series.var_linear, series.var_oscillating]
    rows = list(zip(*columns))
    csv_path = os.path.join(outdir, f"{config.output_prefix}_qfi.csv")
    _write_csv(csv_path, header, rows, config)
    peak = find_first_peak(series)
    _write_summary(os.path.join(outdir, f"{config.output_prefix}_qfi_summary.json"), config, {
        "F_max": peak.f_max,
        "tau": peak.tau,
        "boundary_peak": peak.boundary,
        "provenance": peak.provenance,
    })
    if emit_plot:
        _write_plot_script(csv_path, "1:3", "scaled QFI")


def cmd_scan(config: RunConfig, outdir: str, threads: int, emit_plot: bool) -> None:
    times = _require(config, "time_grid", "scan")
    u_axis = _require(config, "u_grid", "scan")
    basis = build_basis(config.params.N, config.params.M)
    psi0 = _initial_state(config, basis)
    grid = scan_TU(config.params, psi0, times, u_axis, method=config.method,
                   model=config.model, co_vary_omega=config.co_vary_omega,
                   substeps_per_period=config.drive_substeps,
                   include_correlator=True, workers=max(1, threads))
    rows = []
    for j, u in enumerate(grid.u_axis):
        for i, t in enumerate(grid.t_axis):
            rows.append([t, u, grid.values[i, j], grid.correlators[i, j]])
    csv_path = os.path.join(outdir, f"{config.output_prefix}_scan.csv")
    _write_csv(csv_path, ["T", "U", "F_over_T2", "G"], rows, config)
    peak = ubar_from_grid(grid)
    _write_summary(os.path.join(outdir, f"{config.output_prefix}_scan_summary.json"), config, {
        "U_bar": peak.u_bar,
        "F_max": peak.f_max,
        "tau": peak.tau,
        "boundary_peak": peak.boundary,
        "provenance": peak.provenance,
    })
    if emit_plot:
        _write_plot_script(csv_path, "1:2:3", "scaled QFI over (T, U)")


def cmd_scaling(config: RunConfig, outdir: str, threads: int, emit_plot: bool) -> None:
    m_values = _require(config, "m_values", "scaling")
    rows = scaling_study(config.params.N, m_values, config.params,
                         method=config.method, model=config.model,
                         substeps_per_period=config.drive_substeps)
    table = [[r.m, r.f_max, r.tau, r.ratio_to_m2, r.ratio_to_hl,
              r.boundary, r.note] for r in rows]
    csv_path = os.path.join(outdir, f"{config.output_prefix}_scaling.csv")
    _write_csv(csv_path, ["M", "F_max", "tau", "ratio_to_M2", "ratio_to_HL",
                          "boundary", "note"], table, config)
    if emit_plot:
        _write_plot_script(csv_path, "1:4", "peak growth with mode count")


def cmd_spectrum(config: RunConfig, outdir: str, threads: int, emit_plot: bool) -> None:
    u_axis = _require(config, "u_grid", "spectrum")
    basis = build_basis(config.params.N, config.params.M)
    psi0 = _initial_state(config, basis)
    rows = []
    for u in u_axis:
        params = replace(config.params, U=float(u))
        if config.model == "floquet":
            ham = stroboscopic_hamiltonian(params, basis,
                                           substeps_per_period=config.drive_substeps)
        elif config.model in STATIC_MODELS:
            ham = build_hamiltonian(config.model, params, basis)
        else:
            raise ConfigError(
                f"spectrum needs a time-independent model, not {config.model!r}")
        eig = eigensystem(ham)
        overlaps = eigenstate_overlaps(psi0, eig)
        a, b, _ = dominant_pair(eig, overlaps)
        gap = abs(float(eig.energies[a] - eig.energies[b]))
        tau_est = math.pi / gap if gap > 0 else float("nan")
        for k in range(eig.dim):
            rows.append([u, k, float(eig.energies[k]), float(overlaps[k]), gap, tau_est])
    csv_path = os.path.join(outdir, f"{config.output_prefix}_spectrum.csv")
    _write_csv(csv_path, ["U", "k", "E_k", "overlap", "Omega", "tau_est"], rows, config)
    if emit_plot:
        _write_plot_script(csv_path, "1:3", "spectrum over U")


_COMMANDS = {
    "evolve": cmd_evolve,
    "qfi": cmd_qfi,
    "scan": cmd_scan,
    "scaling": cmd_scaling,
    "spectrum": cmd_spectrum,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="latticeqfi",
        description="QFI studies of tilted, driven, and effective Bose-Hubbard chains")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("evolve", "state trajectory: occupations, norm, correlator"),
        ("qfi", "QFI time series and first-peak summary"),
        ("scan", "F/T^2 over a (T, U) grid with U-bar summary"),
        ("scaling", "peak height and tau versus mode count"),
        ("spectrum", "eigenvalues and overlaps over a U sweep"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="path to a JSON run config")
        cmd.add_argument("--out", default=".", help="output directory (default: cwd)")
        cmd.add_argument("--threads", type=int, default=1,
                         help="worker threads for grid scans")
        cmd.add_argument("--emit-plot", action="store_true",
                         help="write a gnuplot script next to each CSV")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
        os.makedirs(args.out, exist_ok=True)
        _COMMANDS[args.command](config, args.out, args.threads, args.emit_plot)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DimensionCapError as exc:
        print(f"dimension-cap error: {exc}", file=sys.stderr)
        return 4
    except (np.linalg.LinAlgError, FloatingPointError, InconclusiveScanError,
            ValueError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
