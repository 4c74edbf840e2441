"""Time series, parameter sweeps, figure presets and their serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import backend as _backend
from .errors import MilburnError, ParameterError, UnknownPresetError, VerificationError
from .evolution import (
    covariance_trajectory,
    normalize_kernel,
    resonant_pairs,
    series_oracle_covariance,
)
from .normal_modes import NormalModes, SystemParams, derive_modes
from .quantifiers import RECORD_FIELDS, STEERING_DET_SCALE, CorrelationRecord, quantities_from_invariants

__all__ = [
    "TimeGrid",
    "DEFAULT_GRID",
    "RunResult",
    "SweepSpec",
    "SweepCell",
    "PresetConfig",
    "CSV_COLUMNS",
    "RAW_COLUMNS",
    "PRESETS",
    "time_series",
    "parameter_sweep",
    "milburn_vs_vonneumann_distance",
    "sync_diagnostic",
    "time_average",
    "figure_preset",
    "thread_count",
    "csv_payload",
    "write_csv",
    "read_csv",
    "write_manifest",
]

CSV_COLUMNS = ("t", "N1", "N2", "E_N", "S_ab", "S_ba", "dS", "purity", "nu_min_raw")
RAW_COLUMNS = ("E_N_raw", "S_ab_raw", "S_ba_raw")

ORACLE_TOL = 1e-8


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of ``steps`` points on ``[t_start, t_end]``."""

    t_start: float
    t_end: float
    steps: int

    def __post_init__(self):
        if not (math.isfinite(self.t_start) and math.isfinite(self.t_end)):
            raise ParameterError("grid bounds must be finite")
        if self.t_start < 0:
            raise ParameterError(f"grid must start at t >= 0, got {self.t_start}")
        if not self.t_end > self.t_start:
            raise ParameterError(f"grid needs t_end > t_start, got [{self.t_start}, {self.t_end}]")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ParameterError(f"grid needs an integer steps >= 2, got {self.steps}")

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, int(self.steps))


DEFAULT_GRID = TimeGrid(0.0, 100.0, 2001)


@dataclass
class RunResult:
    params: SystemParams
    modes: NormalModes
    kernel: str
    columns: dict
    flags: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return self.columns["t"]

    def column(self, name: str) -> np.ndarray:
        return self.columns[name]

    @property
    def records(self) -> list[CorrelationRecord]:
        cols = [self.columns[k] for k in RECORD_FIELDS]
        return [CorrelationRecord(*map(float, row)) for row in zip(*cols)]

    def __len__(self):
        return len(self.columns["t"])


@dataclass(frozen=True)
class SweepSpec:
    base: SystemParams
    axis: str
    values: tuple
    grid: TimeGrid = DEFAULT_GRID

    def __post_init__(self):
        if self.axis not in ("J", "omega2", "Gamma"):
            raise ParameterError(f"sweep axis must be J, omega2 or Gamma, got {self.axis!r}")
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ParameterError("sweep needs at least one value")
        d = np.diff(vals)
        if len(vals) > 1 and not (np.all(d > 0) or np.all(d < 0)):
            raise ParameterError("sweep values must be strictly monotone")
        object.__setattr__(self, "values", vals)


@dataclass
class SweepCell:
    value: float
    params: SystemParams | None
    result: RunResult | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.result is not None


@dataclass(frozen=True)
class PresetConfig:
    label: str
    params: SystemParams
    grid: TimeGrid
    kernel: str


# --- runs --------------------------------------------------------------------


def time_series(
    params: SystemParams,
    grid: TimeGrid = DEFAULT_GRID,
    kernel: str = "milburn",
    det_scale: float = STEERING_DET_SCALE,
    oracle_every: int | None = None,
    backend: str | None = None,
) -> RunResult:
    """Evolve the vacuum on ``grid`` and quantify every point.

    ``oracle_every=n`` recomputes every n-th Milburn covariance by direct
    Poisson summation and raises :class:`VerificationError` on disagreement.
    """
    kernel = normalize_kernel(kernel)
    modes = derive_modes(params)
    t = grid.times()
    k = _backend.get_kernels(backend)
    sigmas = covariance_trajectory(modes, t, kernel, backend=backend)
    cols = {"t": t}
    cols.update(quantities_from_invariants(k.invariants_batch(sigmas), det_scale, sigmas=sigmas))
    pairs = resonant_pairs(modes, params.Gamma) if kernel == "milburn" else []
    flags = {
        "kernel": kernel,
        "backend": k.BACKEND_NAME,
        "steering_det_scale": det_scale,
        "resonant_pairs": [list(p) for p in pairs],
        "resonance": bool(pairs),
    }
    if oracle_every and kernel == "milburn":
        flags["oracle_max_error"] = _oracle_check(modes, t[::oracle_every], sigmas[::oracle_every])
    return RunResult(params=params, modes=modes, kernel=kernel, columns=cols, flags=flags)


def _oracle_check(modes, times, fast):
    worst = 0.0
    for t, S in zip(times, fast):
        ref = series_oracle_covariance(modes, modes.params.Gamma, float(t), eps=1e-12)
        err = float(np.max(np.abs(S - ref)))
        worst = max(worst, err)
        if err > ORACLE_TOL * max(1.0, float(np.max(np.abs(ref)))):
            raise VerificationError(f"series oracle disagrees at t={t:g}: max entry error {err:.3g}")
    return worst


def thread_count(threads: int | None = None) -> int:
    """Worker count: explicit value, else ``MILBURN_THREADS`` (0 = auto)."""
    if threads is None:
        raw = os.environ.get("MILBURN_THREADS", "0").strip() or "0"
        try:
            threads = int(raw)
        except ValueError as exc:
            raise ParameterError(f"MILBURN_THREADS must be an integer, got {raw!r}") from exc
    if threads < 0:
        raise ParameterError(f"thread count must be >= 0, got {threads}")
    return threads or (os.cpu_count() or 1)


def parameter_sweep(
    spec: SweepSpec,
    kernel: str = "milburn",
    det_scale: float = STEERING_DET_SCALE,
    threads: int | None = None,
    backend: str | None = None,
) -> list[SweepCell]:
    """One cell per axis value, in the order given.

    Cells with invalid or unstable parameters carry the error message
    instead of a result; the rest of the sweep still runs.
    """
    kernel = normalize_kernel(kernel)

    def run_cell(value):
        try:
            params = spec.base.replace(**{spec.axis: value})
        except MilburnError as exc:
            return SweepCell(value, None, None, f"{type(exc).__name__}: {exc}")
        try:
            res = time_series(params, spec.grid, kernel, det_scale, backend=backend)
        except MilburnError as exc:
            return SweepCell(value, params, None, f"{type(exc).__name__}: {exc}")
        return SweepCell(value, params, res)

    n = min(thread_count(threads), len(spec.values))
    if n <= 1:
        return [run_cell(v) for v in spec.values]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(run_cell, spec.values))


# --- diagnostics -------------------------------------------------------------


def time_average(result: RunResult, name: str) -> float:
    """Trapezoid-rule time average of a column over the run's grid."""
    t = result.times
    return float(np.trapezoid(result.column(name), t) / (t[-1] - t[0]))


def milburn_vs_vonneumann_distance(
    params: SystemParams, grid: TimeGrid = DEFAULT_GRID, relative: bool = False, backend: str | None = None
) -> float:
    """RMS difference of N1(t) between the Milburn and unitary kernels.

    ``relative=True`` divides by the RMS of the unitary N1 curve (0 when that
    curve vanishes identically).
    """
    mil = time_series(params, grid, "milburn", backend=backend).column("N1")
    vn = time_series(params, grid, "von_neumann", backend=backend).column("N1")
    d = float(np.sqrt(np.mean((mil - vn) ** 2)))
    if relative:
        scale = float(np.sqrt(np.mean(vn**2)))
        return d / scale if scale > 0 else 0.0
    return d


def sync_diagnostic(result: RunResult) -> float:
    """RMS distance between the standardised N1(t) and N2(t) curves.

    Each curve is shifted to zero mean and scaled to unit variance, so only
    the alignment of the oscillations counts; the value is
    ``sqrt(2 (1 - r))`` with ``r`` the Pearson correlation, in ``[0, 2]``.
    A constant curve standardises to zero.
    """
    if len(result) == 0:
        raise ParameterError("sync diagnostic needs a non-empty run")

    def standardise(x):
        x = x - x.mean()
        sd = float(np.sqrt(np.mean(x * x)))
        return x / sd if sd > 1e-300 else np.zeros_like(x)

    n1 = result.column("N1")
    n2 = result.column("N2")
    return float(np.sqrt(np.mean((standardise(n1) - standardise(n2)) ** 2)))


# --- presets -----------------------------------------------------------------

FIG4_LADDER = (0.2, 0.4, 0.6, 0.8, 0.9, 0.99)
ANISOTROPY_OMEGA2 = (1.0, 0.95, 0.7, 0.5, 0.3, 0.21)
COUPLING_J = (0.1, 0.23, 0.35, 0.45, 0.49)
PRESETS = ("fig4", "anisotropy", "coupling")


def figure_preset(name: str, grid: TimeGrid = DEFAULT_GRID) -> list[PresetConfig]:
    """Parameter sets of the three figure studies.

    ``fig4`` pairs both kernels over a coupling ladder given as fractions of
    the stability bound; the ladder is a representative approximation.
    """
    if name == "fig4":
        out = []
        for frac in FIG4_LADDER:
            p = SystemParams(1.0, 1.0, frac * 1.0, 100.0)
            for kernel in ("milburn", "von_neumann"):
                out.append(PresetConfig(f"fig4_J{p.J:g}_{kernel}", p, grid, kernel))
        return out
    if name == "anisotropy":
        return [
            PresetConfig(f"anisotropy_omega2_{w2:g}", SystemParams(1.0, w2, 0.2, 100.0), grid, "milburn")
            for w2 in ANISOTROPY_OMEGA2
        ]
    if name == "coupling":
        return [
            PresetConfig(f"coupling_J{J:g}", SystemParams(1.0, 0.5, J, 100.0), grid, "milburn")
            for J in COUPLING_J
        ]
    raise UnknownPresetError(f"unknown preset {name!r}; choose one of {', '.join(PRESETS)}")


# --- serialisation -----------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def csv_payload(result: RunResult, raw: bool = False) -> str:
    """CSV text: header plus one row per grid point, 17 significant digits, LF."""
    names = CSV_COLUMNS + (RAW_COLUMNS if raw else ())
    cols = [result.column(k) for k in names]
    buf = io.StringIO()
    buf.write(",".join(names) + "\n")
    for row in zip(*cols):
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_csv(result: RunResult, path, raw: bool = False) -> Path:
    path = Path(path)
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write(csv_payload(result, raw))
    return path


def read_csv(path) -> dict:
    """Columns of a CSV written by :func:`write_csv`, as float arrays."""
    with open(path, newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader if row]
    data = np.array(rows, dtype=float).reshape(-1, len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_manifest(path, entries: list[dict], **meta) -> Path:
    path = Path(path)
    doc = dict(meta)
    doc["cells"] = entries
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
