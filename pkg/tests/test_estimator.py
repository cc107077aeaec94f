import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from helix_sturm.discretize import RadialGrid
from helix_sturm.estimator import BoundStateSolver
from helix_sturm.model import Cornell, PhysicalParams, v_eff
from helix_sturm.solve import ProblemSpec, solve_bound_states


def cornell_solver(**kw):
    params = dict(model="cornell", m=1, B0=0.5, PhiB=0.5, n_intervals=3000)
    params.update(kw)
    return BoundStateSolver(**params)


def test_params_round_trip_and_clone():
    est = cornell_solver(levels=4)
    params = est.get_params()
    assert params["model"] == "cornell" and params["levels"] == 4
    twin = clone(est)
    assert twin.get_params() == params
    twin.set_params(cornell_b=0.05)
    assert twin.cornell_b == 0.05 and est.cornell_b == 0.02


def test_fit_matches_pipeline():
    est = cornell_solver().fit()
    spec = ProblemSpec(PhysicalParams(B0=0.5, PhiB=0.5), 1, Cornell(1.0, 0.02), RadialGrid(1e-3, 20.0, 3000))
    ref = solve_bound_states(spec)
    np.testing.assert_array_equal(est.lambdas_, ref.lambdas)
    np.testing.assert_array_equal(est.energies_, ref.energies)
    assert est.functions_.shape == (3, 3001)
    assert list(est.node_counts_) == [0, 1, 2]


def test_transform_interpolates_functions():
    est = cornell_solver().fit()
    nodes = est.grid_.nodes
    out = est.transform(nodes[::7].reshape(-1, 1))
    np.testing.assert_allclose(out, est.functions_[:, ::7].T)
    outside = est.transform(np.array([0.0, 25.0]))
    assert np.all(outside == 0.0)
    r = np.linspace(1e-3, 20.0, 40001)
    rho = est.density(r)
    np.testing.assert_allclose(np.trapezoid(rho, r, axis=0), 1.0, atol=1e-5)


def test_transform_requires_fit_and_valid_input():
    est = cornell_solver()
    with pytest.raises(NotFittedError):
        est.transform(np.array([1.0]))
    est.fit()
    with pytest.raises(ValueError):
        est.transform(np.ones((3, 2)))
    with pytest.raises(ValueError):
        est.transform(np.array([np.nan]))


@pytest.mark.parametrize(
    "kw",
    [{"model": "yukawa"}, {"m": 0.5}, {"levels": 0}, {"r_min": 0.0}, {"hbar": -1.0}, {"u_override": 3}],
)
def test_invalid_settings_raise_on_fit(kw):
    with pytest.raises(ValueError):
        cornell_solver(**kw).fit()


def test_expression_override_and_potential():
    est = BoundStateSolver(u_override="r**2", r_min=1e-6, r_max=12.0, n_intervals=6000).fit()
    np.testing.assert_allclose(est.lambdas_, [3, 7, 11], atol=1e-4)
    np.testing.assert_allclose(est.potential(np.array([2.0])), [2.0])
    cor = cornell_solver()
    r = np.linspace(0.5, 5, 5)
    np.testing.assert_allclose(cor.potential(r), v_eff(r, PhysicalParams(B0=0.5, PhiB=0.5), 1, Cornell()))


def test_fit_transform_takes_radii():
    r = np.linspace(0.5, 10.0, 11).reshape(-1, 1)
    est = cornell_solver(levels=2)
    out = est.fit_transform(r)
    assert out.shape == (11, 2)
    np.testing.assert_array_equal(out, est.transform(r))
