import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helix_sturm.exceptions import InvalidDomain
from helix_sturm.model import (
    Cornell,
    Free,
    Kratzer,
    MorseSmall,
    PhysicalParams,
    QuantumNumbers,
    a_phi,
    du_dparam,
    energy_from_lambda,
    lambda_from_energy,
    make_model,
    u_of_r,
    v1,
    v_eff,
)

finite = st.floats(-3.0, 3.0, allow_nan=False)
positive = st.floats(0.1, 3.0)
radii = st.floats(0.05, 30.0)
ms = st.integers(-6, 6)


def v1_expanded(r, p, m):
    """The geometric term written out term by term."""
    A = -0.5 * p.B0 * r * r + p.PhiB / (2 * math.pi)
    return (
        m * m / r**2
        + p.k**2 * (1 + p.omega**2)
        - 2 * m * p.omega * p.k / r
        + 2 * p.omega * p.k * p.e * A / r
        - 2 * m * p.e * A / r**2
        + p.e**2 * A**2 / r**2
    )


def test_defaults():
    p = PhysicalParams()
    assert (p.hbar, p.mu, p.e, p.k, p.omega, p.B0, p.PhiB) == (1, 1, 1, 1, 1, 0, 0)
    assert p.kinetic_scale == 0.5


@pytest.mark.parametrize("field", ["hbar", "mu"])
@pytest.mark.parametrize("value", [0.0, -1.0])
def test_mass_and_hbar_must_be_positive(field, value):
    with pytest.raises(InvalidDomain):
        PhysicalParams(**{field: value})


@pytest.mark.parametrize("value", [math.nan, math.inf])
def test_non_finite_params_rejected(value):
    with pytest.raises(InvalidDomain):
        PhysicalParams(omega=value)


def test_quantum_numbers_validation():
    QuantumNumbers(-3, 2)
    with pytest.raises(InvalidDomain):
        QuantumNumbers(0.5, 2)
    with pytest.raises(InvalidDomain):
        QuantumNumbers(0, 0)


@pytest.mark.parametrize(
    "kind,kwargs",
    [("kratzer", {"A": 0.0}), ("kratzer", {"D": -1.0}), ("morse_small", {"a": 0.0}), ("nope", {})],
)
def test_model_domain_errors(kind, kwargs):
    with pytest.raises(InvalidDomain):
        make_model(kind, **kwargs)


def test_vector_potential():
    p = PhysicalParams(B0=0.5, PhiB=0.5)
    r = np.array([0.5, 2.0])
    np.testing.assert_allclose(a_phi(r, p), -0.25 * r**2 + 0.5 / (2 * np.pi))


@settings(max_examples=60, deadline=None)
@given(r=radii, m=ms, e=finite, k=finite, omega=finite, B0=finite, PhiB=finite)
def test_v1_matches_term_by_term_expansion(r, m, e, k, omega, B0, PhiB):
    p = PhysicalParams(e=e, k=k, omega=omega, B0=B0, PhiB=PhiB)
    got = float(v1(np.array([r]), p, m)[0])
    want = v1_expanded(r, p, m)
    assert got == pytest.approx(want, rel=1e-11, abs=1e-11 * (1 + abs(m * m / r**2)))


@settings(max_examples=40, deadline=None)
@given(r=radii, m=ms, omega=finite, B0=finite, PhiB=finite)
def test_gauge_decoupling_removes_field_dependence(r, m, omega, B0, PhiB):
    # with e = 0 the field and flux no longer enter
    with_field = PhysicalParams(e=0.0, omega=omega, B0=B0, PhiB=PhiB)
    without = PhysicalParams(e=0.0, omega=omega)
    rr = np.array([r])
    assert v1(rr, with_field, m)[0] == pytest.approx(v1(rr, without, m)[0], rel=1e-13)


@settings(max_examples=40, deadline=None)
@given(r=radii, m=ms, e=finite)
def test_reduction_to_flat_space_centrifugal(r, m, e):
    # no twist, no field, no flux: pure centrifugal barrier plus k^2
    p = PhysicalParams(e=e, k=0.7, omega=0.0)
    rr = np.array([r])
    assert v1(rr, p, m)[0] == pytest.approx(m * m / r**2 + 0.49, rel=1e-12)


def test_u_of_r_definition():
    p = PhysicalParams(hbar=1.3, mu=0.7, B0=0.5, PhiB=0.5)
    model = Cornell(1.0, 0.02)
    r = np.linspace(0.1, 10, 7)
    u = u_of_r(r, p, 1, model)
    want = (2 * p.mu / p.hbar**2) * model(r) + v1(r, p, 1) - 1 / (4 * r**2)
    np.testing.assert_allclose(u, want, rtol=1e-13)
    np.testing.assert_allclose(v_eff(r, p, 1, model), p.kinetic_scale * u, rtol=1e-13)


@settings(max_examples=40, deadline=None)
@given(lam=st.floats(-50, 50), hbar=positive, mu=positive)
def test_energy_lambda_round_trip(lam, hbar, mu):
    p = PhysicalParams(hbar=hbar, mu=mu)
    assert energy_from_lambda(lam, p) == pytest.approx(hbar**2 / (2 * mu) * lam, rel=1e-14, abs=1e-300)
    assert lambda_from_energy(energy_from_lambda(lam, p), p) == pytest.approx(lam, rel=1e-13, abs=1e-13)


@settings(max_examples=40, deadline=None)
@given(A=positive, D=positive, r=radii, m=ms)
def test_kratzer_aggregates_into_coulomb_plus_inverse_square(A, D, r, m):
    # with e = k = 0 the Kratzer problem is Coulomb-like with a shifted barrier
    p = PhysicalParams(e=0.0, k=0.0)
    u = u_of_r(np.array([r]), p, m, Kratzer(A, D))[0]
    want = -4 * D * A / r + (2 * D * A * A + m * m - 0.25) / r**2
    assert u == pytest.approx(want, rel=1e-11, abs=1e-11)


@settings(max_examples=40, deadline=None)
@given(D=positive, a=st.floats(0.05, 1.0), r0=st.floats(0.5, 10.0))
def test_morse_expansion_is_stationary_at_r0(D, a, r0):
    model = MorseSmall(D, a, r0)
    assert model(np.array([r0]))[0] == pytest.approx(-D, rel=1e-12, abs=1e-12)
    h = 1e-4 * r0
    slope = (model(np.array([r0 + h]))[0] - model(np.array([r0 - h]))[0]) / (2 * h)
    assert abs(slope) < 1e-6 * max(1.0, D * a * a * r0)
    assert model.curvature == pytest.approx(2 * D * a * a)
    assert model.D1 == pytest.approx(D * (a * a * r0 * r0 - 1))


def test_free_model_is_zero():
    assert np.all(Free()(np.linspace(0.1, 5, 5)) == 0.0)


PARAM_CASES = [
    (Free(), ["omega", "B0", "PhiB"]),
    (Cornell(1.0, 0.02), ["omega", "B0", "PhiB", "cornell_a", "cornell_b"]),
    (Kratzer(1.0, 1.0), ["omega", "B0", "PhiB", "kratzer_A", "kratzer_D"]),
    (MorseSmall(1.0, 0.3, 5.0), ["omega", "B0", "PhiB", "morse_D", "morse_a", "morse_r0"]),
]


@pytest.mark.parametrize("model,names", PARAM_CASES, ids=lambda x: getattr(x, "kind", None))
def test_du_dparam_matches_central_difference(model, names):
    import dataclasses

    p = PhysicalParams(hbar=1.1, mu=0.9, B0=0.5, PhiB=0.5, omega=0.8)
    r = np.linspace(0.2, 12.0, 25)
    for name in names:
        h = 1e-6

        def shifted(delta):
            if name in ("omega", "B0", "PhiB"):
                pp = dataclasses.replace(p, **{name: getattr(p, name) + delta})
                return u_of_r(r, pp, 1, model)
            fld = name.split("_", 1)[1]
            mm = dataclasses.replace(model, **{fld: getattr(model, fld) + delta})
            return u_of_r(r, p, 1, mm)

        fd = (shifted(h) - shifted(-h)) / (2 * h)
        np.testing.assert_allclose(du_dparam(r, p, 1, model, name), fd, rtol=1e-6, atol=1e-6)


def test_du_dparam_unknown_name():
    with pytest.raises(KeyError):
        du_dparam(np.array([1.0]), PhysicalParams(), 0, Cornell(), "kratzer_A")


def test_model_serialization():
    assert Kratzer(2.0, 0.5).as_dict() == {"type": "kratzer", "A": 2.0, "D": 0.5}
    assert MorseSmall().qualified_names() == ("morse_D", "morse_a", "morse_r0")
    assert make_model("cornell", a=0.5, b=0.1) == Cornell(0.5, 0.1)


@settings(max_examples=40, deadline=None)
@given(r=radii, m=ms, e=finite, omega=finite, B0=finite, PhiB=finite)
def test_reduction_chain_e_and_k_off(r, m, e, omega, B0, PhiB):
    # e -> 0 and k -> 0 leave only the centrifugal term: torsion drops out
    rr = np.array([r])
    p = PhysicalParams(e=0.0, k=0.0, omega=omega, B0=B0, PhiB=PhiB)
    assert v1(rr, p, m)[0] == pytest.approx(m * m / r**2, rel=1e-13, abs=1e-300)


@settings(max_examples=40, deadline=None)
@given(r=radii, m=ms, e=finite, omega=finite, k=finite)
def test_gauge_sector_off_equals_decoupled(r, m, e, omega, k):
    rr = np.array([r])
    charged = PhysicalParams(e=e, k=k, omega=omega, B0=0.0, PhiB=0.0)
    neutral = PhysicalParams(e=0.0, k=k, omega=omega, B0=0.0, PhiB=0.0)
    assert v_eff(rr, charged, m, Free())[0] == v_eff(rr, neutral, m, Free())[0]


@settings(max_examples=40, deadline=None)
@given(A=positive, D=positive, r=radii, m=ms, e=finite, omega=finite, B0=finite)
def test_kratzer_difference_from_free(A, D, r, m, e, omega, B0):
    p = PhysicalParams(e=e, omega=omega, B0=B0, PhiB=0.4)
    rr = np.array([r])
    diff = v_eff(rr, p, m, Kratzer(A, D))[0] - v_eff(rr, p, m, Free())[0]
    want = -2 * D * A / r + D * A * A / r**2
    scale = abs(v_eff(rr, p, m, Free())[0]) + abs(want) + 1.0
    assert diff == pytest.approx(want, abs=1e-12 * scale)


@settings(max_examples=30, deadline=None)
@given(D=positive, a=st.floats(0.05, 1.0), r0=st.floats(0.5, 10.0))
def test_morse_curvature_is_positive(D, a, r0):
    model = MorseSmall(D, a, r0)
    h = 1e-2
    r = np.array([r0 - h, r0, r0 + h])
    v = model(r)
    second = (v[0] - 2 * v[1] + v[2]) / h**2
    assert second == pytest.approx(2 * D * a * a, rel=1e-6)
    assert second > 0
