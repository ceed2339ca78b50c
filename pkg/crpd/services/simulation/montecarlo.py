"""
Monte Carlo study of the CRPD estimator under symmetric DGPs.

Each replication owns a Philox stream keyed by (seed, replication index), so
tables do not depend on how replications are scheduled across processes.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from crpd.core.exceptions import ConfigError, CRPDError
from crpd.models.dataset import Dataset
from crpd.models.gamma import Gamma
from crpd.models.simulation import (
    DgpKind,
    DgpSpec,
    ReplicationOutcome,
    SimulationConfig,
    SimulationRow,
)
from crpd.services.estimation import estimate
from crpd.services.moments import central_moments_model
from crpd.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

OUTCOME = "x"

# Column order of the main metrics table
METRIC_COLUMNS = ["dgp", "n", "gamma", "bias", "mse", "coverage_distortion", "empirical_sd", "mean_se", "ratio"]

WEIGHT_STATS = ["min", "q1", "median", "mean", "q3", "max"]


def replication_rng(seed: int, replication: int) -> np.random.Generator:
    """Counter-based generator for one replication"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(replication,))))


def draw_sample(dgp: DgpSpec, n: int, rng: np.random.Generator) -> Dataset:
    """
    n i.i.d. draws from the DGP as a one-column dataset ``x``

    Student t draws use Z / sqrt(V / df) with Z standard normal and V chi-square(df).
    """
    z = rng.standard_normal(n)
    if dgp.kind == DgpKind.STUDENT_T:
        z = z / np.sqrt(rng.chisquare(dgp.df, n) / dgp.df)
    return Dataset(columns=(OUTCOME,), values=(dgp.mu0 + z)[:, None])


def _run_replication(task: Tuple[SimulationConfig, Gamma, int]) -> ReplicationOutcome:
    config, gamma, replication = task
    dataset = draw_sample(config.dgp, config.n, replication_rng(config.seed, replication))
    try:
        fit = estimate(dataset, central_moments_model(OUTCOME), gamma, config.search, config.solver, config.ci_level)
    except CRPDError as e:
        return ReplicationOutcome(replication=replication, ok=False, error=e.one_line())
    lower, upper = fit.ci[0]
    return ReplicationOutcome(
        replication=replication,
        ok=True,
        mu_hat=float(fit.theta_hat[0]),
        sigma2_hat=float(fit.theta_hat[1]),
        se_mu=float(fit.std_errors[0]),
        covered=bool(lower <= config.dgp.mu0 <= upper),
        lam=fit.multipliers.lam.tolist(),
        delta_shift=fit.multipliers.delta_shift,
        weight_summary=list(fit.diagnostics.weight_summary.as_tuple()),
    )


def _sd(values: np.ndarray) -> Optional[float]:
    return float(np.std(values, ddof=1)) if len(values) >= 2 else None


def _column_sds(matrix: np.ndarray) -> List[Optional[float]]:
    if matrix.shape[0] < 2:
        return [None] * matrix.shape[1]
    return np.std(matrix, axis=0, ddof=1).tolist()


def aggregate(config: SimulationConfig, gamma: Gamma, outcomes: Sequence[ReplicationOutcome]) -> SimulationRow:
    """Collapse replication outcomes of one cell into a metrics row; failed replications are only counted"""
    used = [o for o in outcomes if o.ok]
    failures = len(outcomes) - len(used)
    nan = float("nan")
    if not used:
        return SimulationRow(
            dgp=config.dgp.label, n=config.n, gamma=gamma.value, replications_used=0, failures=failures,
            bias=nan, mse=nan, coverage_distortion=nan, empirical_sd=None, mean_se=nan, ratio=None,
            sigma2_bias=nan, sigma2_mse=nan, lambda_mean=[], lambda_sd=[], delta_mean=nan, delta_sd=None,
            weight_mean=[nan] * len(WEIGHT_STATS), weight_sd=[None] * len(WEIGHT_STATS),
        )

    error = np.array([o.mu_hat for o in used]) - config.dgp.mu0
    sigma2_error = np.array([o.sigma2_hat for o in used]) - config.dgp.var0
    mean_se = float(np.mean([o.se_mu for o in used]))
    empirical_sd = _sd(error)
    ratio = empirical_sd / mean_se if empirical_sd is not None and mean_se > 0 else None
    lam = np.array([o.lam for o in used])
    delta = np.array([o.delta_shift for o in used])
    weights = np.array([o.weight_summary for o in used])

    return SimulationRow(
        dgp=config.dgp.label,
        n=config.n,
        gamma=gamma.value,
        replications_used=len(used),
        failures=failures,
        bias=float(error.mean()),
        mse=float(np.mean(error ** 2)),
        coverage_distortion=float(np.mean([o.covered for o in used])) - config.ci_level,
        empirical_sd=empirical_sd,
        mean_se=mean_se,
        ratio=ratio,
        sigma2_bias=float(sigma2_error.mean()),
        sigma2_mse=float(np.mean(sigma2_error ** 2)),
        lambda_mean=lam.mean(axis=0).tolist(),
        lambda_sd=_column_sds(lam),
        delta_mean=float(delta.mean()),
        delta_sd=_sd(delta),
        weight_mean=weights.mean(axis=0).tolist(),
        weight_sd=_column_sds(weights),
    )


def run_cell(config: SimulationConfig, gamma: Gamma, workers: Optional[int] = None) -> SimulationRow:
    """All replications of one (DGP, n, gamma) cell"""
    gamma = Gamma.of(gamma)
    tasks = [(config, gamma, r) for r in range(config.replications)]
    row = aggregate(config, gamma, ordered_map(_run_replication, tasks, workers))
    _log_row(row)
    return row


def run_study(configs: Sequence[SimulationConfig], workers: Optional[int] = None) -> List[SimulationRow]:
    """
    Every (DGP, n, gamma) cell of the given designs, in config then grid order

    Raises:
        ConfigError: If no design is given
    """
    configs = list(configs)
    if not configs:
        raise ConfigError("a simulation study needs at least one design")
    cells = [(config, Gamma.of(value)) for config in configs for value in config.gamma_grid]
    tasks = [(config, gamma, r) for config, gamma in cells for r in range(config.replications)]
    logger.info("Running %d cells, %d replications in total", len(cells), len(tasks))
    outcomes = ordered_map(_run_replication, tasks, workers)

    rows = []
    start = 0
    for config, gamma in cells:
        chunk = outcomes[start:start + config.replications]
        start += config.replications
        row = aggregate(config, gamma, chunk)
        _log_row(row)
        rows.append(row)
    return rows


def _log_row(row: SimulationRow) -> None:
    if row.failures:
        logger.warning("%s n=%d gamma=%g: %d failed replications excluded", row.dgp, row.n, row.gamma, row.failures)
    logger.info("%s n=%d gamma=%g: bias %.4f, mse %.4f", row.dgp, row.n, row.gamma, row.bias, row.mse)


def metrics_frame(rows: Sequence[SimulationRow]) -> pd.DataFrame:
    """Main metrics table, one row per cell"""
    return pd.DataFrame([row.model_dump(include=set(METRIC_COLUMNS)) for row in rows], columns=METRIC_COLUMNS)


def multipliers_frame(rows: Sequence[SimulationRow]) -> pd.DataFrame:
    """Multiplier and weight-summary means and SDs, one row per cell"""
    records = []
    for row in rows:
        record = {"dgp": row.dgp, "n": row.n, "gamma": row.gamma,
                  "replications_used": row.replications_used, "failures": row.failures}
        for j, (mean, sd) in enumerate(zip(row.lambda_mean, row.lambda_sd), start=1):
            record[f"lambda{j}_mean"] = mean
            record[f"lambda{j}_sd"] = sd
        record["delta_mean"] = row.delta_mean
        record["delta_sd"] = row.delta_sd
        for name, mean, sd in zip(WEIGHT_STATS, row.weight_mean, row.weight_sd):
            record[f"weight_{name}_mean"] = mean
            record[f"weight_{name}_sd"] = sd
        record["sigma2_bias"] = row.sigma2_bias
        record["sigma2_mse"] = row.sigma2_mse
        records.append(record)
    return pd.DataFrame.from_records(records)
