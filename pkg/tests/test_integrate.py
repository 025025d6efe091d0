import numpy as np
import pytest

from edgeworth.economy import Allocation, UtilityParams, mrs_dispersion, utilities
from edgeworth.errors import BoundaryError, DimensionError, NetworkError
from edgeworth.integrate import (
    IntegratorConfig,
    Status,
    equal_gains_check,
    integrate,
    step,
    trajectory_report,
)
from edgeworth.networks import star, weights_from_probabilities
from edgeworth.oracles import contract_curve_two_agent_cd


def test_symmetric_pair_reaches_even_split(symmetric_pair):
    x, params, net = symmetric_pair
    traj, rec = integrate(x, params, net)
    assert rec.status is Status.CONVERGED
    np.testing.assert_allclose(rec.final.entries, 2.0, atol=1e-6)
    np.testing.assert_allclose(rec.utility_gains, 2.0 - np.sqrt(3.0), atol=1e-6)
    assert rec.mrs_residual <= 1e-6 and rec.field_norm < 1e-8
    assert traj.times[0] == 0.0 and np.all(np.diff(traj.times) > 0)
    assert traj.states.shape == (len(traj), 2, 2)


def test_single_step_moves_towards_trade(symmetric_pair):
    x, params, net = symmetric_pair
    res = step(x, params, net, h=0.01)
    assert res.step_size == pytest.approx(0.01)
    assert res.error_ratio <= 1.0
    assert np.all(utilities(res.state, params) > utilities(x, params))
    np.testing.assert_allclose(res.state.entries.sum(axis=1), x.totals, rtol=1e-14)
    # reusing the returned slope gives the same next step
    a = step(res.state, params, net, h=res.next_step, slope=res.slope)
    b = step(res.state, params, net, h=res.next_step)
    np.testing.assert_allclose(a.state.entries, b.state.entries, rtol=1e-14)


def test_already_optimal_on_contract_curve():
    params = UtilityParams.two_goods([0.3, 0.7])
    x = contract_curve_two_agent_cd(params, (4.0, 4.0), 0.4)
    traj, rec = integrate(x, params, weights_from_probabilities([0.5, 0.5]))
    assert rec.status is Status.ALREADY_OPTIMAL
    assert rec.steps == 0 and len(traj) == 1
    assert rec.status.success


def test_max_steps_reported(symmetric_pair):
    x, params, net = symmetric_pair
    _, rec = integrate(x, params, net, IntegratorConfig(max_steps=3))
    assert rec.status is Status.MAX_STEPS and rec.steps == 3
    assert not rec.status.success


def test_boundary_approach_reported():
    # huge first step with no halving budget must leave the interior
    x = Allocation.from_agents([(5.0, 0.01), (0.01, 5.0)])
    params = UtilityParams.two_goods([0.5, 0.5])
    cfg = IntegratorConfig(initial_step=1e6, max_halvings=0)
    _, rec = integrate(x, params, weights_from_probabilities([0.5, 0.5]), cfg)
    assert rec.status is Status.BOUNDARY


def test_boundary_start_rejected():
    x = Allocation.from_agents([(1.0, 1e-12), (1.0, 1.0)])
    with pytest.raises(BoundaryError):
        integrate(x, UtilityParams.two_goods([0.5, 0.5]), weights_from_probabilities([0.5, 0.5]))


def test_dimension_mismatch_rejected(symmetric_pair):
    x, params, _ = symmetric_pair
    with pytest.raises((DimensionError, NetworkError)):
        integrate(x, params, weights_from_probabilities([0.2, 0.3, 0.5]))


def test_stride_thins_samples(symmetric_pair):
    x, params, net = symmetric_pair
    full, rec = integrate(x, params, net)
    thin, rec2 = integrate(x, params, net, IntegratorConfig(stride=10))
    assert rec2.steps == rec.steps
    assert len(thin) == rec.steps // 10 + 1 + (rec.steps % 10 != 0)
    np.testing.assert_array_equal(thin.states[-1], full.states[-1])


def test_time_scale_only_rescales_time(symmetric_pair):
    x, params, net = symmetric_pair
    _, a = integrate(x, params, net)
    _, b = integrate(x, params, net, IntegratorConfig(time_scale=2.0, initial_step=0.005))
    np.testing.assert_allclose(a.final.entries, b.final.entries, atol=1e-6)
    assert b.elapsed_time == pytest.approx(a.elapsed_time / 2, rel=0.05)


@pytest.mark.parametrize("alphas,endow", [
    ([0.4, 0.6], [(3.0, 1.0), (1.0, 3.0)]),
    ([0.25, 0.8], [(1.0, 4.0), (2.0, 0.5)]),
])
def test_two_agent_gains_are_equal(alphas, endow):
    traj, rec = integrate(
        Allocation.from_agents(endow), UtilityParams.two_goods(alphas), weights_from_probabilities([0.5, 0.5])
    )
    rep = equal_gains_check(traj)
    assert rec.status is Status.CONVERGED and rep.passed
    assert rep.relative_deviation < 1e-6


def test_equal_gains_needs_two_agents():
    x = Allocation.from_agents([(3.0, 1.0), (1.0, 3.0), (2.0, 2.0)])
    traj, _ = integrate(x, UtilityParams.two_goods([0.5, 0.4, 0.6]), weights_from_probabilities([1 / 3] * 3))
    with pytest.raises(DimensionError):
        equal_gains_check(traj)


@pytest.mark.parametrize("center", [0, 1, 2])
def test_star_center_takes_half(center):
    x = Allocation.from_agents([(3.0, 1.0), (1.0, 3.0), (2.0, 2.5)])
    params = UtilityParams.two_goods([0.5, 0.4, 0.6])
    _, rec = integrate(x, params, weights_from_probabilities(star(center, 3)))
    g = rec.utility_gains
    others = g.sum() - g[center]
    assert abs(g[center] - others) <= 1e-3 * g.sum()


def test_three_goods_invariants():
    rng = np.random.default_rng(8)
    A = rng.uniform(0.2, 1.0, size=(3, 4))
    A /= A.sum(axis=0)
    x = Allocation(rng.uniform(0.5, 3.0, size=(3, 4)))
    traj, rec = integrate(x, UtilityParams(A), weights_from_probabilities([0.1, 0.2, 0.3, 0.4]))
    assert rec.status is Status.CONVERGED
    rep = trajectory_report(traj)
    assert rep["conservation_ok"] and rep["potential_monotone"] and rep["utilities_monotone"] and rep["axioms_ok"]
    assert mrs_dispersion(rec.final, UtilityParams(A)) <= 1e-6


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(initial_step=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(stride=0)
    assert IntegratorConfig().replace(stride=5).stride == 5
