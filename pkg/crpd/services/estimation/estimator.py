"""
Profiled CRPD estimation: minimize L_n(theta) = I_gamma(pi_hat(theta), 1/n)
over a parameter box by grid search with refinement, then attach first-order
standard errors and confidence intervals.
"""

import itertools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from scipy.optimize import minimize
from scipy.stats import norm

from crpd.core.config import settings
from crpd.core.exceptions import (
    AllInfeasible,
    AllInfinite,
    ConfigError,
    InnerSolverError,
    RankDeficient,
)
from crpd.models.dataset import Dataset
from crpd.models.estimation import EstimationResult, SearchConfig
from crpd.models.gamma import Gamma
from crpd.models.solver import MultiplierState, SolverConfig
from crpd.services.diagnostics import second_order_report
from crpd.services.divergence import index_divergence
from crpd.services.moments import MomentModel
from crpd.services.solver import solve_multipliers

logger = logging.getLogger(__name__)


class _Profiler:
    """Evaluates L_n at parameter values, counting evaluations"""

    def __init__(self, dataset: Dataset, model: MomentModel, gamma: Gamma, solver: SolverConfig):
        self.dataset = dataset
        self.model = model
        self.gamma = gamma
        self.solver = solver
        self.evaluations = 0

    def evaluate(self, theta, warm_start: Optional[MultiplierState] = None) -> Tuple[float, Optional[MultiplierState]]:
        self.evaluations += 1
        g = self.model.moments(self.dataset, theta)
        state = None
        try:
            state = solve_multipliers(g, self.gamma, self.solver, warm_start)
        except InnerSolverError as e:
            if warm_start is None:
                logger.debug("inner solve failed at theta=%s: %s", theta, e.detail)
                return float("inf"), None
        if state is None:
            # warm start led astray; retry from the population solution
            try:
                state = solve_multipliers(g, self.gamma, self.solver, None)
            except InnerSolverError as e:
                logger.debug("inner solve failed at theta=%s: %s", theta, e.detail)
                return float("inf"), None
        with np.errstate(over="ignore", invalid="ignore"):
            value = index_divergence(state.delta_shift + g @ state.lam, self.gamma)
        if not np.isfinite(value):
            return float("inf"), None
        return value, state


def profiled_objective(theta, dataset: Dataset, model: MomentModel, gamma: Gamma,
                       config: Optional[SolverConfig] = None) -> float:
    """
    Divergence of the optimal implied weights at theta

    Returns:
        L_n(theta), or +inf when the inner solve fails
    """
    value, _ = _Profiler(dataset, model, gamma, config or SolverConfig()).evaluate(theta)
    return value


def tie_break_argmin(values: Sequence[float], thetas) -> int:
    """
    Index of the smallest finite value; ties go to the lexicographically smallest theta

    Raises:
        AllInfinite: If no value is finite
    """
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise AllInfinite("no candidate values")
    points = np.asarray(thetas, dtype=float).reshape(values.size, -1)
    finite = np.isfinite(values)
    if not finite.any():
        raise AllInfinite("every candidate value is infinite")
    best = values[finite].min()
    candidates = np.flatnonzero(finite & (values == best))
    if candidates.size == 1:
        return int(candidates[0])
    # np.lexsort uses the last key as primary
    order = np.lexsort(points[candidates].T[::-1])
    return int(candidates[order[0]])


def _grid(lo: np.ndarray, hi: np.ndarray, k: int) -> np.ndarray:
    axes = [np.linspace(a, b, k) for a, b in zip(lo, hi)]
    return np.array(list(itertools.product(*axes)))


def _recenter(center: np.ndarray, width: np.ndarray, lo0: np.ndarray, hi0: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Box of the given width around center, shifted to stay inside the original box"""
    lo = center - width / 2.0
    hi = center + width / 2.0
    shift = np.maximum(lo0 - lo, 0.0) - np.maximum(hi - hi0, 0.0)
    return np.maximum(lo + shift, lo0), np.minimum(hi + shift, hi0)


def _covariance(g: np.ndarray, jacobian_mean: np.ndarray) -> np.ndarray:
    n, q = g.shape
    p = jacobian_mean.shape[1]
    if np.linalg.matrix_rank(jacobian_mean) < p:
        raise RankDeficient(f"average moment Jacobian has column rank below p = {p}")
    omega = g.T @ g / n
    information = jacobian_mean.T @ scipy.linalg.solve(omega, jacobian_mean, assume_a="pos")
    try:
        cov = scipy.linalg.inv(information) / n
    except scipy.linalg.LinAlgError as e:
        raise RankDeficient(f"information matrix is singular: {e}")
    return 0.5 * (cov + cov.T)


def estimate(dataset: Dataset, model: MomentModel, gamma: Gamma,
             search: Optional[SearchConfig] = None, solver: Optional[SolverConfig] = None,
             ci_level: float = settings.CI_LEVEL) -> EstimationResult:
    """
    CRPD point estimate with first-order inference

    Args:
        dataset: The sample
        model: Moment model
        gamma: Power parameter
        search: Grid search settings
        solver: Inner solver settings
        ci_level: Confidence level of the Wald intervals

    Returns:
        EstimationResult at the minimizer of the profiled objective

    Raises:
        AllInfeasible: If the inner problem fails at every initial grid point
        RankDeficient: If the average Jacobian at the estimate lacks full column rank
    """
    search = search or SearchConfig()
    solver = solver or SolverConfig()
    if not 0 < ci_level < 1:
        raise ConfigError(f"ci_level must lie in (0, 1), got {ci_level}")
    model.validate_dataset(dataset)

    bounds: List[Tuple[float, float]] = search.bounds or model.default_bounds(dataset)
    if len(bounds) != model.p:
        raise ConfigError(f"{model.name} has {model.p} parameters but {len(bounds)} bound pairs were given")
    lo0 = np.array([b[0] for b in bounds], dtype=float)
    hi0 = np.array([b[1] for b in bounds], dtype=float)

    profiler = _Profiler(dataset, model, gamma, solver)
    k = search.grid_points_per_dim
    lo, hi = lo0.copy(), hi0.copy()
    best_theta: Optional[np.ndarray] = None
    best_value = float("inf")
    best_state: Optional[MultiplierState] = None

    for round_index in range(search.refine_rounds + 1):
        points = _grid(lo, hi, k)
        values = np.empty(len(points))
        states: List[Optional[MultiplierState]] = []
        warm = best_state
        for j, theta in enumerate(points):
            values[j], state = profiler.evaluate(theta, warm)
            states.append(state)
            if state is not None:
                warm = state
        try:
            idx = tie_break_argmin(values, points)
        except AllInfinite:
            if best_theta is None:
                raise AllInfeasible(
                    f"inner problem failed at all {len(points)} grid points for gamma = {gamma}"
                )
            logger.warning("refinement round %d had no feasible point; keeping previous estimate", round_index)
            break
        if best_theta is None or values[idx] < best_value:
            best_theta, best_value, best_state = points[idx], float(values[idx]), states[idx]
        logger.info("round %d: L_n = %.6e at theta = %s", round_index, best_value, best_theta)

        spacing = (hi - lo) / (k - 1)
        if round_index < search.refine_rounds:
            lo, hi = _recenter(best_theta, (hi - lo) * search.refine_shrink, lo0, hi0)

    if search.polish:
        cell_lo = np.maximum(best_theta - spacing, lo0)
        cell_hi = np.minimum(best_theta + spacing, hi0)
        simplex = [best_theta]
        for j in range(model.p):
            vertex = best_theta.copy()
            vertex[j] = vertex[j] + 0.5 * spacing[j] if vertex[j] + 0.5 * spacing[j] <= cell_hi[j] else vertex[j] - 0.5 * spacing[j]
            simplex.append(vertex)
        anchor = best_state
        result = minimize(
            lambda theta: profiler.evaluate(theta, anchor)[0],
            best_theta,
            method="Nelder-Mead",
            bounds=list(zip(cell_lo, cell_hi)),
            options={
                "initial_simplex": np.array(simplex),
                "xatol": 1e-12,
                "fatol": 1e-15,
                "maxiter": 400 * model.p,
                "maxfev": 400 * model.p,
            },
        )
        if np.isfinite(result.fun) and result.fun < best_value:
            value, state = profiler.evaluate(result.x, best_state)
            if state is not None and value < best_value:
                best_theta, best_value, best_state = np.asarray(result.x, dtype=float), value, state
        else:
            logger.debug("polish did not improve on the grid minimum")

    return _finalize(dataset, model, gamma, best_theta, best_value, best_state, ci_level, profiler.evaluations)


def _finalize(dataset: Dataset, model: MomentModel, gamma: Gamma, theta: np.ndarray, value: float,
              state: MultiplierState, ci_level: float, evaluations: int) -> EstimationResult:
    g = model.moments(dataset, theta)
    jacobian_mean = model.jacobian(dataset, theta).mean(axis=0)
    cov = _covariance(g, jacobian_mean)
    std_errors = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    z = norm.ppf(0.5 + ci_level / 2.0)
    ci = np.column_stack((theta - z * std_errors, theta + z * std_errors))

    weighted_mean = None
    if model.p == 1:
        weighted_mean = float(state.weights @ dataset.column(model.outcome))

    return EstimationResult(
        theta_hat=theta,
        parameter_names=model.parameter_names,
        multipliers=state,
        weights=state.weights,
        divergence_value=value,
        std_errors=std_errors,
        cov_theta=cov,
        ci_level=ci_level,
        ci=ci,
        gamma=gamma,
        objective_evals=evaluations,
        n=dataset.n,
        weighted_outcome_mean=weighted_mean,
        diagnostics=second_order_report(g, jacobian_mean, state, gamma),
    )
