"""Bound-state pipeline: potential -> operator -> eigenpairs -> energies and densities."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import model as _model
from .discretize import RadialGrid, assemble
from .eig import EigenRequest, lowest_eigenpairs
from .exceptions import InvalidDomain, ZeroFunction
from .model import Free, PhysicalParams, PotentialModel

DEFAULT_GRID = RadialGrid(1e-3, 20.0, 4000)
DEFAULT_TOL_REL = 1e-6
NODE_REL_TOL = 1e-8

PHYSICAL_FIELDS = ("hbar", "mu", "e", "k", "omega", "B0", "PhiB")


@dataclass(frozen=True)
class ProblemSpec:
    """Everything needed to set up one radial eigenproblem.

    ``u_override`` replaces the model-built potential by a raw ``u(r)``
    (already in operator units); it is meant for analytic benchmarks.
    """

    params: PhysicalParams = field(default_factory=PhysicalParams)
    m: int = 0
    model: PotentialModel = field(default_factory=Free)
    grid: RadialGrid = DEFAULT_GRID
    levels: int = 3
    tol_lambda: float = 1e-10
    tol_residual: float = 1e-8
    u_override: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def __post_init__(self):
        _model.QuantumNumbers(self.m, self.levels)
        object.__setattr__(self, "m", int(self.m))
        if self.levels > self.grid.dimension:
            raise InvalidDomain(
                f"levels={self.levels} exceeds the operator dimension {self.grid.dimension}"
            )
        if not (self.tol_lambda > 0 and self.tol_residual > 0):
            raise InvalidDomain("tolerances must be positive")

    def potential(self) -> Callable[[np.ndarray], np.ndarray]:
        if self.u_override is not None:
            return self.u_override
        p, m, model = self.params, self.m, self.model
        return lambda r: _model.u_of_r(r, p, m, model)

    def eigen_request(self) -> EigenRequest:
        return EigenRequest(self.levels, self.tol_lambda, self.tol_residual)

    def replace(self, **changes) -> "ProblemSpec":
        return dataclasses.replace(self, **changes)


def get_parameter(spec: ProblemSpec, name: str) -> float:
    if name == "m":
        return spec.m
    if name in PHYSICAL_FIELDS:
        return getattr(spec.params, name)
    prefix, _, fld = name.partition("_")
    if prefix == spec.model.prefix and fld in spec.model.parameter_names():
        return getattr(spec.model, fld)
    raise KeyError(f"unknown parameter {name!r} for model {spec.model.kind!r}")


def replace_parameter(spec: ProblemSpec, name: str, value) -> ProblemSpec:
    """Copy of ``spec`` with one named scalar substituted.

    Names are ``m``, the background fields (``omega``, ``B0``, ...) or
    qualified model fields (``cornell_b``, ``kratzer_A``, ``morse_r0``, ...).
    """
    if name == "m":
        if float(value) != int(value):
            raise InvalidDomain(f"m must be an integer, got {value!r}")
        return spec.replace(m=int(value))
    if name in PHYSICAL_FIELDS:
        return spec.replace(params=dataclasses.replace(spec.params, **{name: float(value)}))
    prefix, _, fld = name.partition("_")
    if prefix == spec.model.prefix and fld in spec.model.parameter_names():
        return spec.replace(model=dataclasses.replace(spec.model, **{fld: float(value)}))
    raise KeyError(f"unknown parameter {name!r} for model {spec.model.kind!r}")


# --------------------------------------------------------------------------
# function post-processing
# --------------------------------------------------------------------------


def _on_nodes(f: np.ndarray, grid: RadialGrid) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape == (grid.n_intervals + 1,):
        return f
    if f.shape == (grid.n_intervals - 1,):
        return np.concatenate(([0.0], f, [0.0]))
    raise ValueError(f"samples of shape {f.shape} do not match a grid with {grid.n_intervals} intervals")


def _nodes_for(f: np.ndarray, grid: RadialGrid) -> np.ndarray:
    return grid.nodes if np.shape(f)[0] == grid.n_intervals + 1 else grid.interior


def norm_squared(f, grid: RadialGrid) -> float:
    """Trapezoidal integral of |f|^2 over [r_min, r_max]."""
    full = _on_nodes(f, grid)
    return float(np.trapezoid(full * full, dx=grid.dr))


def normalize(f, grid: RadialGrid) -> np.ndarray:
    """Scale ``f`` so that the trapezoidal integral of |f|^2 equals one.

    ``f`` may be given on all N+1 nodes or on the N-1 interior nodes (the
    Dirichlet endpoints are then taken as zero); the result has the input's
    length.
    """
    f = np.asarray(f, dtype=float)
    n2 = norm_squared(f, grid)
    if not math.isfinite(n2) or n2 <= 0.0:
        raise ZeroFunction("cannot normalize a function with zero norm")
    return f / math.sqrt(n2)


def density(f) -> np.ndarray:
    """Probability density |f|^2 of the reduced radial function."""
    f = np.asarray(f)
    return np.abs(f) ** 2


def reconstruct_xi(f, grid: RadialGrid) -> np.ndarray:
    """Undo the reduction: xi = f / sqrt(r)."""
    f = np.asarray(f, dtype=float)
    return f / np.sqrt(_nodes_for(f, grid))


def count_nodes(f, rel_tol: float = NODE_REL_TOL) -> int:
    """Sign changes of ``f``, ignoring samples below ``rel_tol * max|f|``."""
    f = np.asarray(f, dtype=float)
    scale = np.max(np.abs(f)) if f.size else 0.0
    if scale == 0.0:
        return 0
    s = np.sign(f[np.abs(f) > rel_tol * scale])
    return int(np.count_nonzero(s[1:] != s[:-1]))


# --------------------------------------------------------------------------
# spectrum
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Lowest eigenpairs of one ProblemSpec.

    ``functions`` holds f_n on the interior nodes, normalized to unit
    trapezoidal norm; ``vectors`` are the same states with unit Euclidean
    norm, as returned by the eigensolver.
    """

    lambdas: np.ndarray
    energies: np.ndarray
    functions: np.ndarray
    vectors: np.ndarray
    spec: ProblemSpec
    provenance: dict

    @property
    def grid(self) -> RadialGrid:
        return self.spec.grid

    @property
    def levels(self) -> int:
        return self.lambdas.size

    def function_on_nodes(self, n: int) -> np.ndarray:
        """f_n on all grid nodes, including the Dirichlet zeros."""
        return _on_nodes(self.functions[n], self.grid)

    def density(self, n: int) -> np.ndarray:
        return density(self.function_on_nodes(n))

    def xi(self, n: int) -> np.ndarray:
        return reconstruct_xi(self.function_on_nodes(n), self.grid)

    def node_counts(self) -> list[int]:
        return [count_nodes(f) for f in self.functions]


def solve_bound_states(spec: ProblemSpec) -> Spectrum:
    T = assemble(spec.grid, spec.potential())
    pairs = lowest_eigenpairs(T, spec.eigen_request())
    nodes = [count_nodes(p.vector) for p in pairs]
    # simple spectrum in exact arithmetic; node count only breaks numerical ties
    order = sorted(range(len(pairs)), key=lambda i: (pairs[i].eigenvalue, nodes[i]))
    pairs = [pairs[i] for i in order]

    grid = spec.grid
    lambdas = np.array([p.eigenvalue for p in pairs])
    vectors = np.array([p.vector for p in pairs])
    functions = np.array([normalize(v, grid) for v in vectors])
    energies = _model.energy_from_lambda(lambdas, spec.params)
    provenance = {
        "grid": grid.as_dict(),
        "dr": grid.dr,
        "tol_lambda": spec.tol_lambda,
        "tol_residual": spec.tol_residual,
        "max_residual": max(p.residual for p in pairs),
        "eigensolver": "sturm-bisection+inverse-iteration",
    }
    return Spectrum(lambdas, energies, functions, vectors, spec, provenance)


# --------------------------------------------------------------------------
# convergence protocol
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    """Stability of the lowest eigenvalues under three grid perturbations.

    Each shift is ``|lambda' - lambda| / max(1, |lambda|)`` per level.
    ``estimated_order`` is the Richardson exponent from N, 2N and 4N.
    """

    baseline: Spectrum
    refined_grid: np.ndarray
    enlarged_domain: np.ndarray
    reduced_cutoff: np.ndarray
    converged: np.ndarray
    estimated_order: np.ndarray
    tol_rel: float
    delta_rmax: float
    variants: dict = field(default_factory=dict)

    @property
    def all_converged(self) -> bool:
        return bool(np.all(self.converged))


def _relative_shift(new, base):
    return np.abs(new - base) / np.maximum(1.0, np.abs(base))


def richardson_order(lam_n, lam_2n, lam_4n):
    """Observed convergence exponent from three successive halvings of dr."""
    lam_n, lam_2n, lam_4n = (np.asarray(x, dtype=float) for x in (lam_n, lam_2n, lam_4n))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log2(np.abs(lam_n - lam_2n) / np.abs(lam_2n - lam_4n))


def converge(
    spec: ProblemSpec,
    tol_rel: float = DEFAULT_TOL_REL,
    delta_rmax: float | None = None,
) -> ConvergenceReport:
    """Run the refinement, domain-enlargement and cutoff-reduction checks.

    Domain enlargement keeps dr fixed and adds intervals, so only the
    outer wall moves.
    """
    if not tol_rel > 0:
        raise InvalidDomain("tol_rel must be positive")
    g = spec.grid
    if delta_rmax is None:
        delta_rmax = 0.25 * (g.r_max - g.r_min)
    grids = {
        "baseline": g,
        "refined_grid": g.refined(2),
        "refined_twice": g.refined(4),
        "enlarged_domain": g.enlarged(delta_rmax),
        "reduced_cutoff": g.with_cutoff(0.5 * g.r_min),
    }
    spectra = {label: solve_bound_states(spec.replace(grid=grid)) for label, grid in grids.items()}
    base = spectra["baseline"].lambdas
    shifts = {
        label: _relative_shift(spectra[label].lambdas, base)
        for label in ("refined_grid", "enlarged_domain", "reduced_cutoff")
    }
    converged = (
        (shifts["refined_grid"] < tol_rel)
        & (shifts["enlarged_domain"] < tol_rel)
        & (shifts["reduced_cutoff"] < tol_rel)
    )
    order = richardson_order(base, spectra["refined_grid"].lambdas, spectra["refined_twice"].lambdas)
    return ConvergenceReport(
        baseline=spectra["baseline"],
        refined_grid=shifts["refined_grid"],
        enlarged_domain=shifts["enlarged_domain"],
        reduced_cutoff=shifts["reduced_cutoff"],
        converged=converged,
        estimated_order=order,
        tol_rel=tol_rel,
        delta_rmax=float(delta_rmax),
        variants={label: s.lambdas for label, s in spectra.items()},
    )


# --------------------------------------------------------------------------
# Hellmann-Feynman
# --------------------------------------------------------------------------


def hellmann_feynman_derivative(spectrum: Spectrum, name: str, level: int = 0) -> float:
    """d lambda_n / d p as the expectation v^T (dT/dp) v.

    The discrete operator depends on p only through its diagonal, so this is
    exact for the discretized problem.
    """
    spec = spectrum.spec
    if spec.u_override is not None:
        raise ValueError("parameter derivatives need a model-built potential")
    du = _model.du_dparam(spec.grid.interior, spec.params, spec.m, spec.model, name)
    v = spectrum.vectors[level]
    return float(v @ (du * v))


def finite_difference_derivative(
    spec: ProblemSpec, name: str, level: int = 0, step: float | None = None
) -> float:
    """Central-difference d lambda_n / d p with one Richardson extrapolation."""
    p0 = float(get_parameter(spec, name))
    h = step if step is not None else 1e-3 * max(1.0, abs(p0))
    short = spec.replace(levels=level + 1)

    def lam(p):
        return solve_bound_states(replace_parameter(short, name, p)).lambdas[level]

    coarse = (lam(p0 + h) - lam(p0 - h)) / (2.0 * h)
    fine = (lam(p0 + 0.5 * h) - lam(p0 - 0.5 * h)) / h
    return (4.0 * fine - coarse) / 3.0
