"""Bound states of a charged particle in a helically twisted background.

The reduced radial problem ``-f'' + U(r) f = lambda f`` is discretized on a
uniform Dirichlet grid and its lowest eigenpairs are found by Sturm-sequence
bisection plus inverse iteration.
"""

__version__ = "0.1.0"

from .discretize import RadialGrid, TridiagonalOperator, assemble, build_grid
from .eig import EigenPair, EigenRequest, bisect_eigenvalues, count_below, lowest_eigenpairs
from .exceptions import (
    ConvergenceFailure,
    HelixSturmError,
    InvalidDomain,
    NonFinitePotential,
    SchemaError,
    ZeroFunction,
)
from .model import (
    Cornell,
    Free,
    Kratzer,
    MorseSmall,
    PhysicalParams,
    PotentialModel,
    QuantumNumbers,
    energy_from_lambda,
    make_model,
    u_of_r,
    v1,
    v_eff,
)
from .solve import (
    ConvergenceReport,
    ProblemSpec,
    Spectrum,
    converge,
    finite_difference_derivative,
    hellmann_feynman_derivative,
    solve_bound_states,
)
from .scan import ScanAxis, ScanResult, scan_density, scan_spectrum, verify_m_asymmetry
from .config import RunConfig, parse_config
from .estimator import BoundStateSolver

__all__ = [
    "BoundStateSolver",
    "ConvergenceFailure",
    "ConvergenceReport",
    "Cornell",
    "EigenPair",
    "EigenRequest",
    "Free",
    "HelixSturmError",
    "InvalidDomain",
    "Kratzer",
    "MorseSmall",
    "NonFinitePotential",
    "PhysicalParams",
    "PotentialModel",
    "ProblemSpec",
    "QuantumNumbers",
    "RadialGrid",
    "RunConfig",
    "ScanAxis",
    "ScanResult",
    "SchemaError",
    "Spectrum",
    "TridiagonalOperator",
    "ZeroFunction",
    "assemble",
    "bisect_eigenvalues",
    "build_grid",
    "converge",
    "count_below",
    "energy_from_lambda",
    "finite_difference_derivative",
    "hellmann_feynman_derivative",
    "lowest_eigenpairs",
    "make_model",
    "parse_config",
    "scan_density",
    "scan_spectrum",
    "solve_bound_states",
    "u_of_r",
    "v1",
    "v_eff",
    "verify_m_asymmetry",
]
