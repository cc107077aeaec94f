"""Uniform radial grid and the three-point finite-difference operator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable

import numpy as np

from .exceptions import InvalidDomain, NonFinitePotential


@dataclass(frozen=True)
class RadialGrid:
    """Truncated uniform mesh ``r_i = r_min + i dr``, ``i = 0..N``.

    Only the three defining numbers take part in equality and hashing, so
    grids can key caches.
    """

    r_min: float
    r_max: float
    n_intervals: int

    def __post_init__(self):
        if not (math.isfinite(self.r_min) and math.isfinite(self.r_max)):
            raise InvalidDomain("grid bounds must be finite")
        if self.r_min <= 0:
            raise InvalidDomain(f"r_min must be > 0 (inner cutoff), got {self.r_min!r}")
        if self.r_max <= self.r_min:
            raise InvalidDomain(f"r_max must exceed r_min, got r_min={self.r_min!r}, r_max={self.r_max!r}")
        if isinstance(self.n_intervals, bool) or int(self.n_intervals) != self.n_intervals:
            raise InvalidDomain(f"n_intervals must be an integer, got {self.n_intervals!r}")
        if self.n_intervals < 3:
            raise InvalidDomain(f"n_intervals must be >= 3, got {self.n_intervals!r}")
        object.__setattr__(self, "n_intervals", int(self.n_intervals))

    @property
    def dr(self) -> float:
        return (self.r_max - self.r_min) / self.n_intervals

    @cached_property
    def nodes(self) -> np.ndarray:
        # each node from its own index: no accumulated drift
        r = self.r_min + np.arange(self.n_intervals + 1, dtype=float) * self.dr
        r[-1] = self.r_max
        r.setflags(write=False)
        return r

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[1:-1]

    @property
    def dimension(self) -> int:
        """Size of the Dirichlet operator, N - 1."""
        return self.n_intervals - 1

    def refined(self, factor: int = 2) -> "RadialGrid":
        return RadialGrid(self.r_min, self.r_max, self.n_intervals * factor)

    def with_cutoff(self, r_min: float) -> "RadialGrid":
        return RadialGrid(r_min, self.r_max, self.n_intervals)

    def enlarged(self, delta: float) -> "RadialGrid":
        """Extend ``r_max`` by about ``delta`` keeping the spacing fixed."""
        dr = self.dr
        extra = max(1, int(round(delta / dr)))
        n = self.n_intervals + extra
        return RadialGrid(self.r_min, self.r_min + n * dr, n)

    def as_dict(self) -> dict:
        return {"r_min": self.r_min, "r_max": self.r_max, "n_intervals": self.n_intervals}


def build_grid(r_min: float, r_max: float, n_intervals: int) -> RadialGrid:
    return RadialGrid(float(r_min), float(r_max), n_intervals)


@lru_cache(maxsize=32)
def _laplacian_offdiag(size: int, dr: float) -> np.ndarray:
    off = np.full(size, -1.0 / (dr * dr))
    off.setflags(write=False)
    return off


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    """Real symmetric tridiagonal matrix on the interior nodes.

    ``diag`` has length N-1, ``offdiag`` length N-2.  The single off-diagonal
    array makes the matrix symmetric by construction.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    grid: RadialGrid | None = field(default=None)

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        off = np.asarray(self.offdiag, dtype=float)
        if diag.ndim != 1 or off.ndim != 1 or off.size != diag.size - 1:
            raise ValueError(f"inconsistent tridiagonal shapes: diag {diag.shape}, offdiag {off.shape}")
        if diag.size < 1:
            raise ValueError("empty operator")
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
            raise ValueError("tridiagonal entries must be finite")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", off)

    @property
    def dimension(self) -> int:
        return self.diag.size

    def norm_bound(self) -> float:
        """Gershgorin bound on the spectral radius."""
        d = np.abs(self.diag)
        o = np.abs(self.offdiag)
        row = d.copy()
        row[:-1] += o
        row[1:] += o
        return float(row.max())

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[:-1] += self.offdiag * x[1:]
        y[1:] += self.offdiag * x[:-1]
        return y

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def with_diagonal(self, diag: np.ndarray) -> "TridiagonalOperator":
        return TridiagonalOperator(diag, self.offdiag, self.grid)


def assemble(grid: RadialGrid, u: Callable[[np.ndarray], np.ndarray]) -> TridiagonalOperator:
    """Discretize ``-d^2/dr^2 + u(r)`` with Dirichlet walls at both grid ends.

    ``u`` is sampled pointwise at the interior nodes; boundary rows are
    dropped, which enforces f(r_min) = f(r_max) = 0.
    """
    r = grid.interior
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = np.broadcast_to(np.asarray(u(r), dtype=float), r.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.argmax(bad))
        raise NonFinitePotential(r[i], values[i])
    dr = grid.dr
    diag = 2.0 / (dr * dr) + values
    return TridiagonalOperator(diag, _laplacian_offdiag(grid.dimension - 1, dr), grid)
