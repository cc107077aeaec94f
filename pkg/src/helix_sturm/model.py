"""Physical parameters and potential formulas for the twisted-geometry radial problem.

Everything here is a pure function of its inputs.  Radii may be scalars or
numpy arrays; all formulas broadcast.

The reduced radial equation reads ``-f'' + U(r) f = lambda f`` with

    U(r) = (2 mu / hbar^2) V(r) + V1(r) - 1 / (4 r^2)

where ``V`` is the external interaction and ``V1`` gathers the torsion and
gauge couplings of the azimuthal vector potential ``A_phi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import ClassVar

import numpy as np

from .exceptions import InvalidDomain

TWO_PI = 2.0 * math.pi


def _require_finite(obj):
    for f in fields(obj):
        value = getattr(obj, f.name)
        if not math.isfinite(value):
            raise InvalidDomain(f"{type(obj).__name__}.{f.name} must be finite, got {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Background constants entering the universal term.

    Defaults follow the dimensionless convention hbar = mu = e = k = 1 with
    unit torsion and the gauge sector switched off.
    """

    hbar: float = 1.0
    mu: float = 1.0
    e: float = 1.0
    k: float = 1.0
    omega: float = 1.0
    B0: float = 0.0
    PhiB: float = 0.0

    def __post_init__(self):
        _require_finite(self)
        if self.hbar <= 0:
            raise InvalidDomain(f"hbar must be > 0, got {self.hbar!r}")
        if self.mu <= 0:
            raise InvalidDomain(f"mu must be > 0, got {self.mu!r}")

    @property
    def kinetic_scale(self) -> float:
        """hbar^2 / (2 mu), the factor converting eigenvalues to energies."""
        return self.hbar**2 / (2.0 * self.mu)


@dataclass(frozen=True)
class QuantumNumbers:
    m: int = 0
    requested_levels: int = 3

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, (int, np.integer)):
            raise InvalidDomain(f"m must be an integer, got {self.m!r}")
        if self.requested_levels < 1:
            raise InvalidDomain("requested_levels must be >= 1")


# --------------------------------------------------------------------------
# external interactions
# --------------------------------------------------------------------------


class PotentialModel:
    """Base class of the external radial interactions.

    Subclasses are frozen dataclasses.  ``kind`` is the tag used in config
    files, ``prefix`` namespaces the model parameters when they are addressed
    by a flat name (``cornell_a``, ``kratzer_D``, ...).
    """

    kind: ClassVar[str] = ""
    prefix: ClassVar[str] = ""

    def __call__(self, r):
        raise NotImplementedError

    def derivative(self, r, name: str):
        """Partial derivative of V(r) with respect to the field ``name``."""
        raise KeyError(f"{type(self).__name__} has no parameter {name!r}")

    def parameter_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in fields(self))

    def qualified_names(self) -> tuple[str, ...]:
        return tuple(f"{self.prefix}_{n}" for n in self.parameter_names())

    def as_dict(self) -> dict:
        out = {"type": self.kind}
        out.update({n: getattr(self, n) for n in self.parameter_names()})
        return out


@dataclass(frozen=True)
class Free(PotentialModel):
    """No external interaction; confinement comes from the background alone."""

    kind: ClassVar[str] = "free"
    prefix: ClassVar[str] = "free"

    def __call__(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class Cornell(PotentialModel):
    """Coulomb-plus-linear interaction ``V = a/r + b r`` (sign as printed)."""

    kind: ClassVar[str] = "cornell"
    prefix: ClassVar[str] = "cornell"

    a: float = 1.0
    b: float = 0.02

    def __post_init__(self):
        _require_finite(self)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.a / r + self.b * r

    def derivative(self, r, name):
        r = np.asarray(r, dtype=float)
        if name == "a":
            return 1.0 / r
        if name == "b":
            return r.copy()
        return super().derivative(r, name)


@dataclass(frozen=True)
class Kratzer(PotentialModel):
    """``V = -2D (A/r - A^2 / (2 r^2))`` with A, D > 0."""

    kind: ClassVar[str] = "kratzer"
    prefix: ClassVar[str] = "kratzer"

    A: float = 1.0
    D: float = 1.0

    def __post_init__(self):
        _require_finite(self)
        if self.A <= 0 or self.D <= 0:
            raise InvalidDomain(f"Kratzer requires A > 0 and D > 0, got A={self.A!r}, D={self.D!r}")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return -2.0 * self.D * (self.A / r - self.A**2 / (2.0 * r * r))

    def derivative(self, r, name):
        r = np.asarray(r, dtype=float)
        if name == "A":
            return -2.0 * self.D * (1.0 / r - self.A / (r * r))
        if name == "D":
            return -2.0 * (self.A / r - self.A**2 / (2.0 * r * r))
        return super().derivative(r, name)


@dataclass(frozen=True)
class MorseSmall(PotentialModel):
    """Quadratic-plus-linear expansion of the Morse well about ``r0``.

    ``V = D a^2 r^2 - 2 D a^2 r0 r + D1`` with ``D1 = D (a^2 r0^2 - 1)``,
    which is ``D a^2 (r - r0)^2 - D``: stationary at r0 with value -D.
    """

    kind: ClassVar[str] = "morse_small"
    prefix: ClassVar[str] = "morse"

    D: float = 1.0
    a: float = 0.3
    r0: float = 5.0

    def __post_init__(self):
        _require_finite(self)
        if self.D <= 0 or self.a <= 0 or self.r0 <= 0:
            raise InvalidDomain(
                f"MorseSmall requires D, a, r0 > 0, got D={self.D!r}, a={self.a!r}, r0={self.r0!r}"
            )

    @property
    def D1(self) -> float:
        return self.D * (self.a**2 * self.r0**2 - 1.0)

    @property
    def curvature(self) -> float:
        """Second derivative of the expansion, 2 D a^2."""
        return 2.0 * self.D * self.a**2

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        k2 = self.D * self.a**2
        return k2 * r * r - 2.0 * k2 * self.r0 * r + self.D1

    def derivative(self, r, name):
        r = np.asarray(r, dtype=float)
        D, a, r0 = self.D, self.a, self.r0
        if name == "D":
            return a**2 * r * r - 2.0 * a**2 * r0 * r + (a**2 * r0**2 - 1.0)
        if name == "a":
            return 2.0 * D * a * (r - r0) ** 2
        if name == "r0":
            return -2.0 * D * a**2 * (r - r0)
        return super().derivative(r, name)


MODEL_TYPES: dict[str, type[PotentialModel]] = {
    cls.kind: cls for cls in (Free, Cornell, Kratzer, MorseSmall)
}

PHYSICAL_PARAMETERS = ("omega", "B0", "PhiB")


def make_model(kind: str, **kwargs) -> PotentialModel:
    try:
        cls = MODEL_TYPES[kind]
    except KeyError:
        raise InvalidDomain(f"unknown potential model {kind!r}; expected one of {sorted(MODEL_TYPES)}")
    return cls(**kwargs)


# --------------------------------------------------------------------------
# potential formulas
# --------------------------------------------------------------------------


def a_phi(r, p: PhysicalParams):
    """Azimuthal vector potential: uniform field plus Aharonov-Bohm flux."""
    r = np.asarray(r, dtype=float)
    return -0.5 * p.B0 * r * r + p.PhiB / TWO_PI


def external_potential(r, model: PotentialModel):
    return model(r)


def v1(r, p: PhysicalParams, m: int):
    """Universal torsion and gauge term of the radial equation."""
    r = np.asarray(r, dtype=float)
    A = a_phi(r, p)
    w, k, e = p.omega, p.k, p.e
    return (
        m * m / (r * r)
        + k * k * (1.0 + w * w)
        - 2.0 * m * w * k / r
        + 2.0 * w * k * e * A / r
        - 2.0 * m * e * A / (r * r)
        + e * e * A * A / (r * r)
    )


def v_eff(r, p: PhysicalParams, m: int, model: PotentialModel):
    r = np.asarray(r, dtype=float)
    return external_potential(r, model) + p.kinetic_scale * (v1(r, p, m) - 0.25 / (r * r))


def u_of_r(r, p: PhysicalParams, m: int, model: PotentialModel):
    """Scaled potential ``(2 mu / hbar^2) V_eff`` entering the operator."""
    return v_eff(r, p, m, model) / p.kinetic_scale


def energy_from_lambda(lam, p: PhysicalParams):
    return p.kinetic_scale * np.asarray(lam, dtype=float)


def lambda_from_energy(energy, p: PhysicalParams):
    return np.asarray(energy, dtype=float) / p.kinetic_scale


def _dv1_dA(r, p, m):
    # d V1 / d A_phi
    A = a_phi(r, p)
    return 2.0 * p.omega * p.k * p.e / r - 2.0 * m * p.e / (r * r) + 2.0 * p.e**2 * A / (r * r)


def du_dparam(r, p: PhysicalParams, m: int, model: PotentialModel, name: str):
    """Analytic derivative of U(r) with respect to a named scalar parameter.

    ``name`` is either a background parameter (``omega``, ``B0``, ``PhiB``)
    or a qualified model parameter such as ``cornell_a`` or ``morse_r0``.
    This is the diagonal of dT/dp used in Hellmann-Feynman checks.
    """
    r = np.asarray(r, dtype=float)
    if name == "omega":
        A = a_phi(r, p)
        return 2.0 * p.omega * p.k**2 - 2.0 * m * p.k / r + 2.0 * p.k * p.e * A / r
    if name == "B0":
        return _dv1_dA(r, p, m) * (-0.5 * r * r)
    if name == "PhiB":
        return _dv1_dA(r, p, m) / TWO_PI
    prefix, _, field = name.partition("_")
    if prefix != model.prefix or field not in model.parameter_names():
        raise KeyError(f"parameter {name!r} does not apply to model {model.kind!r}")
    return model.derivative(r, field) / p.kinetic_scale
