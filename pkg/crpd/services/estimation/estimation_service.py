import logging
from typing import Optional

from crpd.core.config import settings
from crpd.models.dataset import Dataset
from crpd.models.estimation import EstimationResult, SearchConfig
from crpd.models.gamma import Gamma
from crpd.models.solver import SolverConfig
from crpd.services.moments import MomentModel

from .estimator import estimate

logger = logging.getLogger(__name__)


class EstimationService:
    """Service for fitting moment models at a fixed gamma"""

    def __init__(
        self,
        search: Optional[SearchConfig] = None,
        solver: Optional[SolverConfig] = None,
        ci_level: float = settings.CI_LEVEL,
    ):
        self.search = search or SearchConfig()
        self.solver = solver or SolverConfig()
        self.ci_level = ci_level

    def fit(self, dataset: Dataset, model: MomentModel, gamma: Gamma) -> EstimationResult:
        """
        Estimate theta for one model and gamma

        Args:
            dataset: The sample
            model: Moment model
            gamma: Power parameter

        Returns:
            EstimationResult with standard errors and diagnostics
        """
        logger.info("Fitting %s at gamma = %s on n = %d", model.name, gamma, dataset.n)
        result = estimate(dataset, model, gamma, self.search, self.solver, self.ci_level)
        logger.info(
            "Fitted %s: theta = %s, L_n = %.6e after %d objective evaluations",
            model.name, result.theta_hat.tolist(), result.divergence_value, result.objective_evals,
        )
        return result
