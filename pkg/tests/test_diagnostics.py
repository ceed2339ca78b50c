import numpy as np
import pytest

from crpd.core.exceptions import SingularOmega
from crpd.models.dataset import Dataset
from crpd.models.gamma import Gamma
from crpd.models.solver import MultiplierState
from crpd.services.diagnostics import (
    b_lambda,
    delta_statistic,
    lambda_first_order,
    second_order_report,
    weight_summary,
)
from crpd.services.moments import central_moments_model
from crpd.services.solver import solve_multipliers


def _state(lam, delta_shift, weights):
    return MultiplierState(
        lam=np.asarray(lam, dtype=float),
        delta_shift=delta_shift,
        weights=np.asarray(weights, dtype=float),
        residual_norm=0.0,
        iterations=0,
        converged=True,
    )


def test_b_lambda_vanishes_at_gamma_one(rng):
    g = rng.standard_normal((30, 3)) + 0.2
    np.testing.assert_array_equal(b_lambda(g, Gamma.of(1.0)), np.zeros(3))


def test_b_lambda_vanishes_for_centred_moments(demeaned_moments):
    np.testing.assert_allclose(b_lambda(demeaned_moments, Gamma.of(0.0)), 0.0, atol=1e-14)


def test_b_lambda_scalar_oracle():
    # g_bar = 1/3, Omega = 3, v = sqrt(3)/9, (1/n) sum (v g_i)^2 g_i = 1/81
    assert b_lambda(np.array([1.0, 2.0, -2.0]), Gamma.of(0.0))[0] == pytest.approx(1.0 / 486.0, abs=1e-10)


def test_b_lambda_prefactor_scaling(rng):
    g = rng.standard_normal((25, 2)) + 0.3
    base = b_lambda(g, Gamma.of(0.0))
    for gamma in (-1.0, -0.5, 0.5, 2.0):
        np.testing.assert_allclose(b_lambda(g, Gamma.of(gamma)), (1.0 - gamma) * base, rtol=1e-12)


def test_b_lambda_singular_omega():
    g = np.column_stack((np.ones(5), np.ones(5)))
    with pytest.raises(SingularOmega):
        b_lambda(g, Gamma.of(0.0))


def test_lambda_first_order(rng):
    g = rng.standard_normal((20, 2))
    omega = g.T @ g / 20
    np.testing.assert_allclose(lambda_first_order(g), np.linalg.solve(omega, g.mean(axis=0)))


def test_delta_statistic_population_state():
    assert delta_statistic(_state([0.0], 0.0, np.full(4, 0.25)), 4, Gamma.of(0.5)) == (0.0, 0.0)


def test_delta_statistic_scaling():
    stat, scaled = delta_statistic(_state([0.1], -0.002, np.full(50, 0.02)), 50, Gamma.of(0.0))
    assert stat == pytest.approx(-0.1)
    assert scaled == pytest.approx(0.2)


def test_delta_statistic_el_branch_has_no_scaled_value():
    stat, scaled = delta_statistic(_state([0.1], -0.002, np.full(50, 0.02)), 50, Gamma.of(-1.0))
    assert stat == pytest.approx(-0.1)
    assert scaled is None


@pytest.mark.parametrize("n,value", [(25, 0.04), (50, 0.02)])
def test_weight_summary_uniform(n, value):
    summary = weight_summary(np.full(n, 1.0 / n))
    np.testing.assert_allclose(summary.as_tuple(), value, rtol=1e-12)


def test_weight_summary_hand_example():
    summary = weight_summary([0.1, 0.2, 0.3, 0.4])
    assert summary.minimum == pytest.approx(0.1)
    assert summary.maximum == pytest.approx(0.4)
    assert summary.mean == pytest.approx(0.25)
    assert summary.median == pytest.approx(0.25)
    assert summary.q1 == pytest.approx(0.175)
    assert summary.q3 == pytest.approx(0.325)


def test_weight_summary_mean_at_solution(rng):
    g = rng.standard_normal((40, 2)) + 0.1
    state = solve_multipliers(g, Gamma.of(0.5))
    summary = weight_summary(state.weights)
    assert summary.mean == pytest.approx(1.0 / 40, abs=1e-10)
    assert summary.minimum <= summary.q1 <= summary.median <= summary.q3 <= summary.maximum


def test_second_order_report(normal_dataset):
    model = central_moments_model()
    theta = [0.05, 0.9]
    g = model.moments(normal_dataset, theta)
    jacobian_mean = model.jacobian(normal_dataset, theta).mean(axis=0)
    gamma = Gamma.of(0.5)
    state = solve_multipliers(g, gamma)
    report = second_order_report(g, jacobian_mean, state, gamma)
    np.testing.assert_allclose(report.b_lambda, b_lambda(g, gamma))
    np.testing.assert_allclose(report.theta_bias_partial, jacobian_mean.T @ report.b_lambda)
    assert report.delta_stat == pytest.approx(50 * state.delta_shift)
    assert report.delta_stat_scaled == pytest.approx(report.delta_stat / -0.75)
    assert report.evaluated_at == "theta_hat"


@pytest.mark.slow
@pytest.mark.parametrize("gamma", [0.0, 0.5])
def test_scaled_delta_statistic_has_chi_square_mean(gamma):
    rng = np.random.default_rng(3)
    n = 200
    model = central_moments_model()
    scaled = []
    for _ in range(2000):
        data = Dataset.from_columns({"x": rng.standard_normal(n)})
        state = solve_multipliers(model.moments(data, [0.0, 1.0]), Gamma.of(gamma))
        scaled.append(delta_statistic(state, n, Gamma.of(gamma))[1])
    assert 2.7 <= np.mean(scaled) <= 3.3


@pytest.mark.slow
def test_delta_statistic_sign():
    rng = np.random.default_rng(5)
    n = 500
    model = central_moments_model()
    negative = 0
    for _ in range(400):
        data = Dataset.from_columns({"x": rng.standard_normal(n)})
        state = solve_multipliers(model.moments(data, [0.0, 1.0]), Gamma.of(0.5))
        negative += delta_statistic(state, n, Gamma.of(0.5))[0] <= 0
    assert negative / 400 >= 0.95
