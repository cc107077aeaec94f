"""Batch parameter sweeps and density profiles built on solve_bound_states."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .solve import (
    DEFAULT_TOL_REL,
    ProblemSpec,
    converge,
    count_nodes,
    get_parameter,
    replace_parameter,
    solve_bound_states,
)

SCAN_PARAMETERS = (
    "omega",
    "m",
    "cornell_a",
    "cornell_b",
    "kratzer_A",
    "kratzer_D",
    "morse_D",
    "morse_a",
    "morse_r0",
    "B0",
    "PhiB",
)

WORKERS_ENV = "HELIX_STURM_WORKERS"


def default_workers() -> int:
    value = os.environ.get(WORKERS_ENV)
    if not value:
        return 1
    try:
        n = int(value)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {value!r}")
    if n < 1:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {value!r}")
    return n


@dataclass(frozen=True)
class ScanAxis:
    parameter: str
    values: tuple

    def __post_init__(self):
        if self.parameter not in SCAN_PARAMETERS:
            raise ValueError(f"unknown scan parameter {self.parameter!r}; expected one of {SCAN_PARAMETERS}")
        values = tuple(self.values)
        if not values:
            raise ValueError("scan axis needs at least one value")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("scan values must be finite")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("scan values must be strictly ascending")
        if self.parameter == "m":
            if any(float(v) != int(v) for v in values):
                raise ValueError("m values must be integers")
            values = tuple(int(v) for v in values)
        else:
            values = tuple(float(v) for v in values)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class ScanRow:
    axis_value: float
    m: int
    n_r: int
    lam: float
    energy: float
    converged: bool | None
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(eq=False)
class ScanResult:
    axis: ScanAxis
    base_spec: ProblemSpec
    m_set: tuple
    levels: int
    rows: list
    metadata: dict = field(default_factory=dict)

    @property
    def failures(self) -> list:
        return [row for row in self.rows if not row.ok]

    def energies(self, m: int, n_r: int) -> np.ndarray:
        """E_{n_r, m} along the axis (NaN where the point failed)."""
        out = {row.axis_value: row.energy for row in self.rows if row.m == m and row.n_r == n_r}
        return np.array([out.get(v, math.nan) for v in self.axis.values])


@dataclass(frozen=True, eq=False)
class DensityCurve:
    omega: float
    n_r: int
    r: np.ndarray
    rho: np.ndarray
    norm: float
    nodes: int
    status: str = "ok"


@dataclass(eq=False)
class DensityResult:
    base_spec: ProblemSpec
    omegas: tuple
    n_r_set: tuple
    curves: list
    metadata: dict = field(default_factory=dict)

    def curve(self, omega: float, n_r: int) -> DensityCurve:
        for c in self.curves:
            if c.omega == omega and c.n_r == n_r:
                return c
        raise KeyError((omega, n_r))

    @property
    def failures(self) -> list:
        return [c for c in self.curves if c.status != "ok"]


def _error_status(exc: Exception) -> str:
    return f"error: {type(exc).__name__}: {exc}"


def _scan_point(task):
    spec, axis_value, check, tol_rel, delta_rmax = task
    try:
        if check:
            report = converge(spec, tol_rel, delta_rmax)
            spectrum, flags = report.baseline, [bool(c) for c in report.converged]
        else:
            spectrum, flags = solve_bound_states(spec), [None] * spec.levels
    except Exception as exc:  # recorded in-row, never fatal
        status = _error_status(exc)
        return [
            ScanRow(axis_value, spec.m, n, math.nan, math.nan, False if check else None, status)
            for n in range(spec.levels)
        ]
    return [
        ScanRow(axis_value, spec.m, n, float(spectrum.lambdas[n]), float(spectrum.energies[n]), flags[n])
        for n in range(spec.levels)
    ]


def _run_tasks(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves submission order, so output never depends on timing
        return list(pool.map(fn, tasks))


def _failed_points(axis_value, m, levels, exc, check):
    status = _error_status(exc)
    return [ScanRow(axis_value, m, n, math.nan, math.nan, False if check else None, status) for n in range(levels)]


def scan_spectrum(
    base: ProblemSpec,
    axis: ScanAxis,
    m_set: Sequence[int] = (-1, 0, 1),
    levels: int = 3,
    check_convergence: bool = False,
    tol_rel: float = DEFAULT_TOL_REL,
    delta_rmax: float | None = None,
    workers: int | None = None,
) -> ScanResult:
    """Solve every (axis value, m) point and collect the lowest ``levels``.

    Rows are ordered by (axis value, m, n_r).  A point that fails is kept as
    rows with an ``error`` status instead of aborting the sweep.  When
    ``axis.parameter == "m"`` the axis itself supplies the m values.
    """
    workers = default_workers() if workers is None else workers
    m_values = tuple(axis.values) if axis.parameter == "m" else tuple(int(m) for m in m_set)
    base = base.replace(levels=levels)
    if axis.parameter == "m":
        points = [(value, value) for value in axis.values]
    else:
        points = [(value, m) for value in axis.values for m in m_values]
    tasks, prefilled = [], {}
    for value, m in points:
        key = (value, m)
        try:
            spec = replace_parameter(base, axis.parameter, value)
            if axis.parameter != "m":
                spec = replace_parameter(spec, "m", m)
        except Exception as exc:
            prefilled[key] = _failed_points(value, m, levels, exc, check_convergence)
            continue
        tasks.append((key, (spec, value, check_convergence, tol_rel, delta_rmax)))
    results = dict(zip([k for k, _ in tasks], _run_tasks(_scan_point, [t for _, t in tasks], workers)))
    results.update(prefilled)
    rows = [row for key in points for row in results[key]]
    metadata = {
        "axis": axis.parameter,
        "values": list(axis.values),
        "m_set": list(m_values),
        "levels": levels,
        "grid": base.grid.as_dict(),
        "tol_lambda": base.tol_lambda,
        "tol_residual": base.tol_residual,
        "check_convergence": check_convergence,
        "tol_rel": tol_rel,
        "delta_rmax": delta_rmax if delta_rmax is not None else 0.25 * (base.grid.r_max - base.grid.r_min),
    }
    return ScanResult(axis, base, m_values, levels, rows, metadata)


def _density_point(task):
    spec, omega, n_r_set = task
    try:
        spectrum = solve_bound_states(spec)
    except Exception as exc:
        status = _error_status(exc)
        empty = np.array([])
        return [DensityCurve(omega, n, empty, empty, math.nan, -1, status) for n in n_r_set]
    grid = spec.grid
    curves = []
    for n in n_r_set:
        f = spectrum.function_on_nodes(n)
        rho = spectrum.density(n)
        curves.append(
            DensityCurve(omega, n, np.array(grid.nodes), rho, float(np.trapezoid(rho, dx=grid.dr)), count_nodes(f))
        )
    return curves


def scan_density(
    base: ProblemSpec,
    omegas: Sequence[float] = (0.5, 1.0, 2.0),
    n_r_set: Sequence[int] = (0, 1, 2),
    workers: int | None = None,
) -> DensityResult:
    """Normalized densities rho = |f|^2 for each torsion value and radial level."""
    workers = default_workers() if workers is None else workers
    omegas = tuple(float(w) for w in omegas)
    n_r_set = tuple(int(n) for n in n_r_set)
    if not n_r_set or min(n_r_set) < 0:
        raise ValueError("n_r_set must contain non-negative levels")
    levels = max(n_r_set) + 1
    tasks = []
    for w in omegas:
        spec = replace_parameter(base.replace(levels=levels), "omega", w)
        tasks.append((spec, w, n_r_set))
    curves = [c for group in _run_tasks(_density_point, tasks, workers) for c in group]
    metadata = {
        "omegas": list(omegas),
        "n_r": list(n_r_set),
        "m": base.m,
        "grid": base.grid.as_dict(),
        "tol_lambda": base.tol_lambda,
        "tol_residual": base.tol_residual,
    }
    return DensityResult(base, omegas, n_r_set, curves, metadata)


@dataclass(frozen=True, eq=False)
class MAsymmetryReport:
    """Comparison of the m and -m ladders with and without the gauge coupling."""

    m: int
    energies_plus: np.ndarray
    energies_minus: np.ndarray
    decoupled_plus: np.ndarray
    decoupled_minus: np.ndarray
    max_diff: float
    max_diff_decoupled: float
    tolerance: float
    symmetry_expected: bool

    @property
    def decoupled_symmetric(self) -> bool:
        return self.max_diff_decoupled <= self.tolerance

    @property
    def gauge_asymmetric(self) -> bool:
        return self.max_diff > self.tolerance


def verify_m_asymmetry(base: ProblemSpec, m: int, decouple: Sequence[str] = ("e", "k")) -> MAsymmetryReport:
    """Measure E_n(m) - E_n(-m) at the base point and with ``decouple`` zeroed.

    With e = 0 the only m-odd term left is the torsion Coulomb piece
    -2 m omega k / r, so exact symmetry is expected only if omega k = 0
    as well.
    """

    def ladder(spec, mm):
        return solve_bound_states(replace_parameter(spec, "m", mm)).energies

    decoupled = base
    for name in decouple:
        decoupled = replace_parameter(decoupled, name, 0.0)
    plus, minus = ladder(base, m), ladder(base, -m)
    dplus, dminus = ladder(decoupled, m), ladder(decoupled, -m)
    scale = max(1.0, float(np.max(np.abs(np.concatenate([plus, minus, dplus, dminus])))))
    # bisection tolerance, or the rounding level of the operator if larger
    dr = base.grid.dr
    floor = 64.0 * np.finfo(float).eps * 4.0 / (dr * dr)
    tolerance = max(10.0 * base.tol_lambda * scale, floor) * base.params.kinetic_scale
    omega_k = get_parameter(decoupled, "omega") * get_parameter(decoupled, "k")
    gauge_off = get_parameter(decoupled, "e") == 0.0
    return MAsymmetryReport(
        m=int(m),
        energies_plus=plus,
        energies_minus=minus,
        decoupled_plus=dplus,
        decoupled_minus=dminus,
        max_diff=float(np.max(np.abs(plus - minus))),
        max_diff_decoupled=float(np.max(np.abs(dplus - dminus))),
        tolerance=float(tolerance),
        symmetry_expected=gauge_off and omega_k == 0.0,
    )
