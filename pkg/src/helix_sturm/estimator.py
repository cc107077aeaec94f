"""scikit-learn style facade over the bound-state pipeline.

``BoundStateSolver`` holds every setting as a flat constructor argument, so
``get_params`` / ``set_params`` / ``clone`` work as usual.  ``fit`` solves
the eigenproblem; ``transform`` evaluates the normalized reduced radial
functions at arbitrary radii.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .discretize import RadialGrid
from .expression import PotentialExpression
from .model import MODEL_TYPES, PhysicalParams, make_model, v_eff
from .solve import ProblemSpec, solve_bound_states

MODEL_FIELDS = {
    "free": {},
    "cornell": {"a": "cornell_a", "b": "cornell_b"},
    "kratzer": {"A": "kratzer_A", "D": "kratzer_D"},
    "morse_small": {"D": "morse_D", "a": "morse_a", "r0": "morse_r0"},
}


class BoundStateSolver(TransformerMixin, BaseEstimator):
    """Lowest bound states for one (parameters, m, model, grid) point.

    Parameters
    ----------
    model : {"free", "cornell", "kratzer", "morse_small"}
        External interaction; its coefficients are the prefixed arguments
        (``cornell_a``, ``kratzer_D``, ...).
    m : int
        Azimuthal quantum number.
    levels : int
        Number of radial levels n_r = 0 .. levels-1.
    u_override : str or callable, optional
        Raw ``u(r)`` in operator units replacing the model potential.

    Attributes
    ----------
    spectrum_ : Spectrum
    lambdas_, energies_ : ndarray of shape (levels,)
    functions_ : ndarray of shape (levels, N + 1), continuum-normalized on the nodes
    grid_ : RadialGrid
    """

    def __init__(
        self,
        model="free",
        m=0,
        levels=3,
        hbar=1.0,
        mu=1.0,
        e=1.0,
        k=1.0,
        omega=1.0,
        B0=0.0,
        PhiB=0.0,
        cornell_a=1.0,
        cornell_b=0.02,
        kratzer_A=1.0,
        kratzer_D=1.0,
        morse_D=1.0,
        morse_a=0.3,
        morse_r0=5.0,
        r_min=1e-3,
        r_max=20.0,
        n_intervals=4000,
        tol_lambda=1e-10,
        tol_residual=1e-8,
        u_override=None,
    ):
        self.model = model
        self.m = m
        self.levels = levels
        self.hbar = hbar
        self.mu = mu
        self.e = e
        self.k = k
        self.omega = omega
        self.B0 = B0
        self.PhiB = PhiB
        self.cornell_a = cornell_a
        self.cornell_b = cornell_b
        self.kratzer_A = kratzer_A
        self.kratzer_D = kratzer_D
        self.morse_D = morse_D
        self.morse_a = morse_a
        self.morse_r0 = morse_r0
        self.r_min = r_min
        self.r_max = r_max
        self.n_intervals = n_intervals
        self.tol_lambda = tol_lambda
        self.tol_residual = tol_residual
        self.u_override = u_override

    def _build_spec(self) -> ProblemSpec:
        if self.model not in MODEL_TYPES:
            raise ValueError(f"model must be one of {sorted(MODEL_TYPES)}, got {self.model!r}")
        if isinstance(self.m, (bool, np.bool_)) or float(self.m) != int(self.m):
            raise ValueError(f"m must be an integer, got {self.m!r}")
        if isinstance(self.levels, (bool, np.bool_)) or int(self.levels) != self.levels or self.levels < 1:
            raise ValueError(f"levels must be a positive integer, got {self.levels!r}")
        params = PhysicalParams(
            hbar=float(self.hbar),
            mu=float(self.mu),
            e=float(self.e),
            k=float(self.k),
            omega=float(self.omega),
            B0=float(self.B0),
            PhiB=float(self.PhiB),
        )
        fields = {name: float(getattr(self, attr)) for name, attr in MODEL_FIELDS[self.model].items()}
        override = self.u_override
        if isinstance(override, str):
            override = PotentialExpression(override)
        elif override is not None and not callable(override):
            raise ValueError("u_override must be an expression string or a callable")
        return ProblemSpec(
            params=params,
            m=int(self.m),
            model=make_model(self.model, **fields),
            grid=RadialGrid(float(self.r_min), float(self.r_max), int(self.n_intervals)),
            levels=int(self.levels),
            tol_lambda=float(self.tol_lambda),
            tol_residual=float(self.tol_residual),
            u_override=override,
        )

    def fit(self, X=None, y=None):
        """Solve the eigenproblem.  ``X`` and ``y`` are ignored."""
        spec = self._build_spec()
        self.spectrum_ = solve_bound_states(spec)
        self.grid_ = spec.grid
        self.lambdas_ = self.spectrum_.lambdas
        self.energies_ = self.spectrum_.energies
        self.functions_ = np.array([self.spectrum_.function_on_nodes(n) for n in range(spec.levels)])
        self.node_counts_ = np.array(self.spectrum_.node_counts())
        self.n_features_in_ = 1
        return self

    def _radii(self, X):
        X = check_array(X, ensure_2d=False, dtype=float)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise ValueError(f"expected radii with a single column, got shape {X.shape}")
            X = X[:, 0]
        return X

    def transform(self, X):
        """Reduced radial functions f_n(r) at the radii in ``X``.

        Linear interpolation between grid nodes; zero outside
        [r_min, r_max], consistent with the Dirichlet walls.
        Returns an array of shape (n_samples, levels).
        """
        check_is_fitted(self, "functions_")
        r = self._radii(X)
        nodes = self.grid_.nodes
        return np.column_stack([np.interp(r, nodes, f, left=0.0, right=0.0) for f in self.functions_])

    def density(self, X):
        """Probability densities |f_n(r)|^2, shape (n_samples, levels)."""
        return self.transform(X) ** 2

    def potential(self, r):
        """Effective potential V_eff(r) in energy units for the current settings."""
        spec = self._build_spec()
        r = self._radii(r)
        if spec.u_override is not None:
            return spec.params.kinetic_scale * spec.u_override(r)
        return v_eff(r, spec.params, spec.m, spec.model)
