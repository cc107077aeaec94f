"""Lowest eigenpairs of a symmetric tridiagonal matrix.

Eigenvalues are isolated one index at a time by bisection on the Sturm count
(number of negative pivots of the shifted LDL^T factorization).  Eigenvectors
come from inverse iteration at the converged shift.  Only the few lowest
states are ever needed, so this is cheaper than a full QR sweep and selects
by index deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.linalg.lapack import dgttrf, dgttrs

from .discretize import TridiagonalOperator
from .exceptions import ConvergenceFailure

EPS = np.finfo(float).eps
SIGN_THRESHOLD = 1e-12
RESIDUAL_FLOOR = 32.0
EXTRA_SWEEPS = 2


@dataclass(frozen=True)
class EigenRequest:
    count: int = 3
    tol_lambda: float = 1e-10
    tol_residual: float = 1e-8
    max_iter: int = 40

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if not (self.tol_lambda > 0 and self.tol_residual > 0):
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True, eq=False)
class EigenPair:
    eigenvalue: float
    vector: np.ndarray
    residual: float = 0.0
    iterations: int = 0


@numba.njit(cache=True)
def _sturm_count(diag, off2, x, pivmin):
    n = diag.shape[0]
    count = 0
    q = diag[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = (diag[i] - x) - off2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@numba.njit(cache=True)
def _bisect(diag, off2, index, lo, hi, rtol, pivmin):
    # invariant: count(lo) <= index < count(hi)
    while True:
        mid = 0.5 * (lo + hi)
        scale = max(1.0, abs(lo), abs(hi))
        if hi - lo <= rtol * scale or mid <= lo or mid >= hi:
            return mid
        if _sturm_count(diag, off2, mid, pivmin) <= index:
            lo = mid
        else:
            hi = mid


def _prepare(T: TridiagonalOperator):
    norm = T.norm_bound()
    off2 = T.offdiag * T.offdiag
    pivmin = max(EPS * norm, np.finfo(float).tiny)
    return norm, off2, pivmin


def gershgorin_bounds(T: TridiagonalOperator) -> tuple[float, float]:
    o = np.abs(T.offdiag)
    radius = np.zeros_like(T.diag)
    radius[:-1] += o
    radius[1:] += o
    lo = float(np.min(T.diag - radius))
    hi = float(np.max(T.diag + radius))
    pad = 2.0 * EPS * max(abs(lo), abs(hi), 1.0) * T.dimension
    return lo - pad, hi + pad


def count_below(T: TridiagonalOperator, x: float) -> int:
    """Number of eigenvalues of ``T`` strictly below ``x``."""
    _, off2, pivmin = _prepare(T)
    return int(_sturm_count(T.diag, off2, float(x), pivmin))


def bisect_eigenvalues(T: TridiagonalOperator, count: int, tol_lambda: float = 1e-10) -> np.ndarray:
    """The ``count`` lowest eigenvalues, ascending, by Sturm bisection."""
    if not 1 <= count <= T.dimension:
        raise ValueError(f"requested {count} eigenvalues of a {T.dimension}x{T.dimension} matrix")
    _, off2, pivmin = _prepare(T)
    lo, hi = gershgorin_bounds(T)
    # brackets depend only on the index, never on evaluation order
    return np.array([_bisect(T.diag, off2, k, lo, hi, tol_lambda, pivmin) for k in range(count)])


def _start_vector(n, seed):
    return np.random.default_rng(seed).standard_normal(n)


def _fix_sign(v):
    big = np.flatnonzero(np.abs(v) > SIGN_THRESHOLD)
    if big.size and v[big[0]] < 0:
        v = -v
    return v


def _dense_solver(T, shift):
    M = T.to_dense() - shift * np.eye(T.dimension)
    lu = lu_factor(M, check_finite=False)
    return lambda x: lu_solve(lu, x, check_finite=False)


def _shifted_solver(T, shift, norm):
    """Factor ``T - shift`` once and return a solve function."""
    if T.dimension < 3:
        # the dgttrf wrapper rejects n < 3; a dense LU is exact enough here
        return _dense_solver(T, shift)
    lu = dgttrf(T.offdiag.copy(), T.diag - shift, T.offdiag.copy())
    bump = 0
    while lu[-1] > 0 and bump < 8:
        # exactly singular pivot: nudge the shift by a few ulps of ||T||
        bump += 1
        lu = dgttrf(T.offdiag.copy(), T.diag - (shift + bump * EPS * norm), T.offdiag.copy())
    if lu[-1] != 0:
        raise np.linalg.LinAlgError(f"dgttrf failed with info={lu[-1]}")
    dl, d, du, du2, ipiv = lu[:5]

    def solve(x):
        y, info = dgttrs(dl, d, du, du2, ipiv, x)
        if info != 0:
            raise np.linalg.LinAlgError(f"dgttrs failed with info={info}")
        return y

    return solve


def inverse_iteration(
    T: TridiagonalOperator,
    eigenvalue: float,
    index: int,
    locked: list[np.ndarray] | None = None,
    tol_residual: float = 1e-8,
    max_iter: int = 40,
    tol_lambda: float = 1e-10,
) -> EigenPair:
    """Eigenvector for a converged eigenvalue.

    ``locked`` vectors (same cluster, already computed) are projected out at
    every step.  One restart from a fresh random vector is attempted before
    giving up.  The returned eigenvalue is the Rayleigh quotient of the
    vector whenever that stays inside the bisection bracket.
    """
    locked = locked or []
    norm = T.norm_bound()
    solve = _shifted_solver(T, eigenvalue, norm)
    scale = max(1.0, abs(eigenvalue))
    # residuals cannot be resolved below the rounding level of T itself
    bound = max(tol_residual * scale, RESIDUAL_FLOOR * EPS * norm)
    best = np.inf
    total = 0
    for attempt in range(2):
        x = _start_vector(T.dimension, seed=[index, attempt])
        for v in locked:
            x -= (v @ x) * v
        x /= np.linalg.norm(x)
        extra = 0
        for _ in range(max_iter + EXTRA_SWEEPS):
            total += 1
            y = solve(x)
            for v in locked:
                y -= (v @ y) * v
            ny = np.linalg.norm(y)
            if not np.isfinite(ny) or ny == 0.0:
                break
            x = y / ny
            Tx = T.matvec(x)
            lam = float(x @ Tx)
            if abs(lam - eigenvalue) > tol_lambda * scale:
                lam = float(eigenvalue)
            res = float(np.linalg.norm(Tx - lam * x))
            best = min(best, res)
            if res <= bound:
                extra += 1
                # keep sweeping a little past the test, as LAPACK dstein does
                if extra > EXTRA_SWEEPS:
                    return EigenPair(lam, _fix_sign(x), res, total)
    raise ConvergenceFailure(index, best)


def lowest_eigenpairs(T: TridiagonalOperator, req: EigenRequest | None = None) -> list[EigenPair]:
    """The ``req.count`` lowest eigenpairs of ``T`` in ascending order."""
    req = req or EigenRequest()
    lams = bisect_eigenvalues(T, req.count, req.tol_lambda)
    cluster_gap = 1e3 * req.tol_lambda
    pairs: list[EigenPair] = []
    for k, lam in enumerate(lams):
        locked = [
            p.vector
            for p in pairs
            if abs(p.eigenvalue - lam) < cluster_gap * max(1.0, abs(lam))
        ]
        pairs.append(inverse_iteration(T, lam, k, locked, req.tol_residual, req.max_iter, req.tol_lambda))
    return pairs
