"""
K-fold selection of the power parameter gamma.

For every candidate gamma the model is fitted on each training fold and
scored on the held-out fold; the gamma with the lowest mean loss among those
whose folds all converged is refitted on the full sample.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from crpd.core.config import settings
from crpd.core.exceptions import AllGammaFailed, BadFoldCount, ConfigError, CRPDError, NotApplicable
from crpd.models.crossval import CvConfig, CvLoss, CvReport
from crpd.models.dataset import Dataset
from crpd.models.estimation import SearchConfig
from crpd.models.gamma import Gamma
from crpd.models.solver import SolverConfig
from crpd.services.estimation import estimate
from crpd.services.moments import MomentModel
from crpd.utils.parallel import ordered_map

logger = logging.getLogger(__name__)


def kfold_partition(n: int, folds: int, seed: int = 0, shuffle: bool = True) -> List[int]:
    """
    Fold index of every observation

    The (optionally permuted) index order is cut into contiguous blocks whose
    sizes differ by at most one.

    Raises:
        BadFoldCount: Unless 2 <= folds <= n
    """
    if not 2 <= folds <= n:
        raise BadFoldCount(f"need 2 <= K <= n, got K = {folds} with n = {n}")
    order = np.arange(n)
    if shuffle:
        order = np.random.default_rng(seed).permutation(n)
    assignment = np.empty(n, dtype=int)
    for k, block in enumerate(np.array_split(order, folds)):
        assignment[block] = k
    return assignment.tolist()


def cv_loss_moment_instability(validation_g) -> float:
    """Squared Euclidean norm of the held-out mean of g"""
    g = np.asarray(validation_g, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    g_bar = g.mean(axis=0)
    return float(g_bar @ g_bar)


def cv_loss_prediction_mse(validation_outcomes, theta_hat) -> float:
    """
    Mean squared deviation of held-out outcomes from the training estimate

    Raises:
        NotApplicable: If theta_hat is not a scalar mean
    """
    theta = np.asarray(theta_hat, dtype=float).ravel()
    if theta.size != 1:
        raise NotApplicable("prediction loss needs a one-parameter mean model")
    x = np.asarray(validation_outcomes, dtype=float).ravel()
    return float(np.mean((x - theta[0]) ** 2))


# (dataset, model, gamma, fold assignment, fold index, loss, search, solver)
_FoldTask = Tuple[Dataset, MomentModel, Gamma, np.ndarray, int, CvLoss, SearchConfig, SolverConfig]


def _score_fold(task: _FoldTask) -> Optional[float]:
    dataset, model, gamma, assignment, k, loss, search, solver = task
    held_out = assignment == k
    train = dataset.subset(np.flatnonzero(~held_out))
    validation = dataset.subset(np.flatnonzero(held_out))
    try:
        fit = estimate(train, model, gamma, search, solver)
    except CRPDError as e:
        logger.debug("gamma = %s fold %d failed: %s", gamma, k, e.one_line())
        return None
    if loss == CvLoss.PREDICTION_MSE:
        return cv_loss_prediction_mse(validation.column(model.outcome), fit.theta_hat)
    return cv_loss_moment_instability(model.moments(validation, fit.theta_hat))


def select_gamma(dataset: Dataset, model: MomentModel, cv: Optional[CvConfig] = None,
                 search: Optional[SearchConfig] = None, solver: Optional[SolverConfig] = None,
                 workers: Optional[int] = None) -> CvReport:
    """
    Cross-validated choice of gamma followed by a full-sample refit

    Args:
        dataset: The sample
        model: Moment model
        cv: Grid, folds, loss and seed
        search: Grid search settings for every fit
        solver: Inner solver settings for every fit
        workers: Worker processes for the (gamma, fold) fits

    Returns:
        CvReport with the loss curve, failures and refit

    Raises:
        BadFoldCount: If K > n
        NotApplicable: If the prediction loss is asked of a multi-parameter model
        AllGammaFailed: If every gamma has a failed fold
    """
    cv = cv or CvConfig()
    search = search or SearchConfig()
    solver = solver or SolverConfig()
    model.validate_dataset(dataset)
    if len(cv.gamma_grid) > settings.MAX_CV_GRID and not cv.allow_large_grid:
        raise ConfigError(
            f"gamma grid has {len(cv.gamma_grid)} points (limit {settings.MAX_CV_GRID}); "
            "enable allow_large_grid to run it"
        )
    if cv.loss == CvLoss.PREDICTION_MSE and model.p != 1:
        raise NotApplicable(f"prediction_mse needs a one-parameter mean model, {model.name} has p = {model.p}")

    assignment = np.asarray(kfold_partition(dataset.n, cv.folds, cv.seed, cv.shuffle))
    gammas = cv.gammas
    tasks = [
        (dataset, model, gamma, assignment, k, cv.loss, search, solver)
        for gamma in gammas
        for k in range(cv.folds)
    ]
    logger.info("Cross-validating %d gamma values over %d folds", len(gammas), cv.folds)
    scores = ordered_map(_score_fold, tasks, workers)

    per_gamma_loss: Dict[Gamma, float] = {}
    fold_losses: Dict[Gamma, List[float]] = {}
    failures: Dict[Gamma, int] = {}
    for i, gamma in enumerate(gammas):
        row = scores[i * cv.folds:(i + 1) * cv.folds]
        ok = [s for s in row if s is not None]
        fold_losses[gamma] = [float("nan") if s is None else s for s in row]
        failures[gamma] = len(row) - len(ok)
        per_gamma_loss[gamma] = float(np.mean(ok)) if ok else float("nan")
        if failures[gamma]:
            logger.warning("gamma = %s excluded: %d of %d folds failed", gamma, failures[gamma], cv.folds)

    eligible = [g for g in gammas if failures[g] == 0]
    if not eligible:
        raise AllGammaFailed(f"every one of {len(gammas)} gamma values had a failed fold")
    selected = min(eligible, key=lambda g: (per_gamma_loss[g], abs(g.value), g.value))
    logger.info("Selected gamma = %s with loss %.6e", selected, per_gamma_loss[selected])

    refit = estimate(dataset, model, selected, search, solver)
    return CvReport(
        per_gamma_loss=per_gamma_loss,
        fold_losses=fold_losses,
        failures=failures,
        selected_gamma=selected,
        fold_assignments=assignment.tolist(),
        loss=cv.loss,
        refit=refit,
    )
