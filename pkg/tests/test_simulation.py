import numpy as np
import pandas as pd
import pytest

from crpd.core.exceptions import ConfigError
from crpd.models.estimation import SearchConfig
from crpd.models.gamma import Gamma
from crpd.models.simulation import DgpKind, DgpSpec, ReplicationOutcome, SimulationConfig, default_simulation_grid
from crpd.services.estimation import estimate
from crpd.services.moments import central_moments_model
from crpd.services.simulation import (
    METRIC_COLUMNS,
    aggregate,
    draw_sample,
    metrics_frame,
    multipliers_frame,
    replication_rng,
    run_cell,
    run_study,
)

SEARCH = SearchConfig(grid_points_per_dim=11, refine_rounds=3)
NORMAL = DgpSpec(kind=DgpKind.NORMAL)
T5 = DgpSpec(kind=DgpKind.STUDENT_T, df=5)


def _config(**overrides):
    values = dict(dgp=NORMAL, n=20, gamma_grid=[0.0], replications=6, seed=7, search=SEARCH)
    values.update(overrides)
    return SimulationConfig(**values)


def test_dgp_spec_validation():
    assert T5.var0 == pytest.approx(5.0 / 3.0)
    assert T5.label == "t5"
    assert NORMAL.var0 == 1.0
    with pytest.raises(ValueError):
        DgpSpec(kind=DgpKind.STUDENT_T, df=2)
    with pytest.raises(ValueError):
        DgpSpec(kind=DgpKind.NORMAL, df=5)


def test_default_grid():
    assert default_simulation_grid() == [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0]


def test_replication_streams_are_keyed():
    first = replication_rng(7, 3).standard_normal(5)
    np.testing.assert_array_equal(first, replication_rng(7, 3).standard_normal(5))
    assert not np.array_equal(first, replication_rng(7, 4).standard_normal(5))
    assert not np.array_equal(first, replication_rng(8, 3).standard_normal(5))


def test_normal_draws_moments():
    x = draw_sample(NORMAL, 1_000_000, replication_rng(1, 0)).column("x")
    assert abs(x.mean()) <= 4 / np.sqrt(x.size)
    assert x.var() == pytest.approx(1.0, rel=0.01)


def test_student_t_draws_variance():
    x = draw_sample(T5, 1_000_000, replication_rng(1, 0)).column("x")
    assert x.var() == pytest.approx(5.0 / 3.0, rel=0.03)


def test_draws_are_reproducible():
    first = draw_sample(T5, 30, replication_rng(2, 11))
    second = draw_sample(T5, 30, replication_rng(2, 11))
    np.testing.assert_array_equal(first.values, second.values)


def test_run_cell_metrics():
    config = _config()
    row = run_cell(config, Gamma.of(0.0), workers=1)
    assert row.replications_used + row.failures == config.replications
    assert row.mse == pytest.approx(row.empirical_sd ** 2 * (row.replications_used - 1) / row.replications_used
                                    + row.bias ** 2, abs=1e-10)
    assert -config.ci_level <= row.coverage_distortion <= 1 - config.ci_level
    assert row.ratio == pytest.approx(row.empirical_sd / row.mean_se)
    assert len(row.lambda_mean) == 3
    assert len(row.weight_mean) == 6
    assert row.weight_mean[3] == pytest.approx(1.0 / config.n, abs=1e-10)


def test_single_replication_cell():
    config = _config(replications=1)
    row = run_cell(config, Gamma.of(0.5), workers=1)
    data = draw_sample(NORMAL, config.n, replication_rng(config.seed, 0))
    fit = estimate(data, central_moments_model(), Gamma.of(0.5), SEARCH)
    assert row.bias == pytest.approx(fit.theta_hat[0])
    assert row.empirical_sd is None
    assert row.ratio is None
    assert row.delta_sd is None


def test_aggregate_excludes_failures():
    config = _config(replications=3)
    outcomes = [
        ReplicationOutcome(replication=0, ok=True, mu_hat=0.2, sigma2_hat=1.1, se_mu=0.1, covered=True,
                           lam=[0.1, 0.0, 0.0], delta_shift=-0.01, weight_summary=[0.04] * 6),
        ReplicationOutcome(replication=1, ok=False, error="MaxIterations: forced"),
        ReplicationOutcome(replication=2, ok=True, mu_hat=-0.4, sigma2_hat=0.8, se_mu=0.3, covered=False,
                           lam=[0.3, 0.0, 0.0], delta_shift=-0.03, weight_summary=[0.05] * 6),
    ]
    row = aggregate(config, Gamma.of(0.0), outcomes)
    assert (row.replications_used, row.failures) == (2, 1)
    assert row.bias == pytest.approx(-0.1)
    assert row.mse == pytest.approx(0.1)
    assert row.mean_se == pytest.approx(0.2)
    assert row.coverage_distortion == pytest.approx(0.5 - config.ci_level)
    assert row.sigma2_bias == pytest.approx(-0.05)
    assert row.lambda_mean == pytest.approx([0.2, 0.0, 0.0])
    assert row.delta_mean == pytest.approx(-0.02)


def test_aggregate_all_failed():
    config = _config(replications=1)
    row = aggregate(config, Gamma.of(0.0), [ReplicationOutcome(replication=0, ok=False, error="x")])
    assert row.replications_used == 0 and row.failures == 1
    assert np.isnan(row.bias)


def test_study_tables_and_worker_independence():
    configs = [_config(gamma_grid=[-1.0, 0.5], replications=4), _config(dgp=T5, n=25, gamma_grid=[0.0], replications=3)]
    serial = run_study(configs, workers=1)
    pooled = run_study(configs, workers=3)
    assert [(r.dgp, r.n, r.gamma) for r in serial] == [("normal", 20, -1.0), ("normal", 20, 0.5), ("t5", 25, 0.0)]
    frame = metrics_frame(serial)
    assert list(frame.columns) == METRIC_COLUMNS
    pd.testing.assert_frame_equal(frame, metrics_frame(pooled))
    pd.testing.assert_frame_equal(multipliers_frame(serial), multipliers_frame(pooled))
    assert {"lambda1_mean", "lambda3_sd", "delta_mean", "weight_median_sd"} <= set(multipliers_frame(serial).columns)


def test_study_needs_designs():
    with pytest.raises(ConfigError):
        run_study([])


def _table_cell(dgp, n):
    return run_cell(_config(dgp=dgp, n=n, gamma_grid=[-1.0], replications=1000, seed=2024), Gamma.of(-1.0))


@pytest.mark.slow
def test_normal_n50_el_cell():
    row = _table_cell(NORMAL, 50)
    assert row.bias == pytest.approx(-0.0060, abs=0.015)
    assert row.coverage_distortion == pytest.approx(-0.0390, abs=0.04)
    assert row.ratio == pytest.approx(1.1275, abs=0.15)


@pytest.mark.slow
def test_t5_n25_el_cell():
    row = _table_cell(T5, 25)
    assert row.mse == pytest.approx(0.0923, abs=0.025)
    assert row.bias == pytest.approx(-0.0174, abs=0.03)


@pytest.mark.slow
def test_asymptotic_spread_matches_plug_in():
    x = draw_sample(NORMAL, 1_000_000, replication_rng(99, 0))
    model = central_moments_model()
    g = model.moments(x, [0.0, 1.0])
    jacobian = model.jacobian(x, [0.0, 1.0]).mean(axis=0)
    omega = g.T @ g / g.shape[0]
    avar = np.linalg.inv(jacobian.T @ np.linalg.solve(omega, jacobian))[0, 0]

    row = run_cell(_config(n=200, replications=500, seed=5), Gamma.of(0.0))
    assert np.sqrt(200) * row.empirical_sd == pytest.approx(np.sqrt(avar), rel=0.10)


@pytest.fixture(scope="module")
def design_table():
    configs = [
        SimulationConfig(dgp=dgp, n=n, replications=1000, seed=2024, search=SEARCH)
        for dgp in (NORMAL, T5)
        for n in (25, 50)
    ]
    return metrics_frame(run_study(configs))


def _cell(table, dgp, n):
    return table[(table["dgp"] == dgp) & (table["n"] == n)]


@pytest.mark.slow
def test_heavy_tails_favor_negative_gamma(design_table):
    cell = _cell(design_table, "t5", 25)
    assert cell.loc[cell["mse"].idxmin(), "gamma"] < 0


@pytest.mark.slow
def test_normal_data_favor_nonnegative_gamma(design_table):
    cell = _cell(design_table, "normal", 50)
    assert cell.loc[cell["mse"].idxmin(), "gamma"] >= 0


@pytest.mark.slow
@pytest.mark.parametrize("dgp", ["normal", "t5"])
def test_coverage_improves_with_n(design_table, dgp):
    best = {n: _cell(design_table, dgp, n)["coverage_distortion"].abs().min() for n in (25, 50)}
    assert best[50] < best[25]
