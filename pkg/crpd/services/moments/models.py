"""
Moment-condition models g(z, theta).

Every model here is a recipe over an outcome column x with parameters
theta = (mu,) or (mu, sigma2): each recipe term contributes one moment
coordinate. The two models used in the simulation study and the empirical
application, and the just-identified mean model, are fixed recipes.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from crpd.core.exceptions import ConfigError, DimensionMismatch
from crpd.models.dataset import Dataset
from crpd.models.run_config import ModelBinding

logger = logging.getLogger(__name__)

LEVEL = "level"
SQUARE = "square"
CUBE = "cube"
PRODUCT_PREFIX = "product:"


class MomentModel:
    """
    Moment function over an outcome column, built from a recipe of terms

    Recipe terms:
        level            x - mu
        square           (x - mu)^2 - sigma2
        cube             (x - mu)^3
        product:<col>    (x - mu) * z, with z the named instrument column
    """

    def __init__(self, name: str, outcome: str, recipe: Sequence[str]):
        if not recipe:
            raise ConfigError("A moment recipe needs at least one term")
        terms = []
        for term in recipe:
            term = term.strip()
            if term in (LEVEL, SQUARE, CUBE):
                terms.append(term)
            elif term.startswith(PRODUCT_PREFIX) and term[len(PRODUCT_PREFIX):]:
                terms.append(term)
            else:
                raise ConfigError(
                    f"Unknown recipe term '{term}'. Use level, square, cube or product:<column>"
                )
        if len(set(terms)) != len(terms):
            raise ConfigError("Recipe terms must be distinct")

        self.name = name
        self.outcome = outcome
        self.recipe: Tuple[str, ...] = tuple(terms)
        self.p = 2 if SQUARE in terms else 1
        self.q = len(terms)
        if self.q < self.p:
            raise ConfigError(f"Recipe has {self.q} moments for {self.p} parameters")

    @property
    def parameter_names(self) -> Tuple[str, ...]:
        return ("mu", "sigma2") if self.p == 2 else ("mu",)

    @property
    def instruments(self) -> List[str]:
        return [t[len(PRODUCT_PREFIX):] for t in self.recipe if t.startswith(PRODUCT_PREFIX)]

    @property
    def required_columns(self) -> List[str]:
        return [self.outcome] + self.instruments

    def __repr__(self) -> str:
        return f"MomentModel(name={self.name!r}, outcome={self.outcome!r}, recipe={list(self.recipe)!r})"

    def _theta(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float).ravel()
        if theta.size != self.p:
            raise DimensionMismatch(f"{self.name} expects {self.p} parameters, got {theta.size}")
        return theta

    def validate_dataset(self, dataset: Dataset) -> None:
        """
        Check that the dataset carries the model's columns and enough rows

        Raises:
            MissingColumn: If a required column is absent
            DimensionMismatch: If n < q + 1
        """
        for column in self.required_columns:
            dataset.column(column)
        if dataset.n < self.q + 1:
            raise DimensionMismatch(
                f"{self.name} has q = {self.q} moments and needs at least {self.q + 1} rows, got {dataset.n}"
            )

    def moments(self, dataset: Dataset, theta) -> np.ndarray:
        """n x q matrix of g(z_i, theta)"""
        theta = self._theta(theta)
        u = dataset.column(self.outcome) - theta[0]
        columns = []
        for term in self.recipe:
            if term == LEVEL:
                columns.append(u)
            elif term == SQUARE:
                columns.append(u * u - theta[1])
            elif term == CUBE:
                columns.append(u ** 3)
            else:
                columns.append(u * dataset.column(term[len(PRODUCT_PREFIX):]))
        return np.column_stack(columns)

    def jacobian(self, dataset: Dataset, theta) -> np.ndarray:
        """n x q x p array of dg(z_i, theta)/dtheta'"""
        theta = self._theta(theta)
        u = dataset.column(self.outcome) - theta[0]
        n = dataset.n
        jac = np.zeros((n, self.q, self.p))
        for j, term in enumerate(self.recipe):
            if term == LEVEL:
                jac[:, j, 0] = -1.0
            elif term == SQUARE:
                jac[:, j, 0] = -2.0 * u
                jac[:, j, 1] = -1.0
            elif term == CUBE:
                jac[:, j, 0] = -3.0 * u * u
            else:
                jac[:, j, 0] = -dataset.column(term[len(PRODUCT_PREFIX):])
        return jac

    def default_bounds(self, dataset: Dataset) -> List[Tuple[float, float]]:
        """
        Data-driven search box: mean +/- 6 SD/sqrt(n) for mu and
        variance x [0.2, 5] for sigma2
        """
        x = dataset.column(self.outcome)
        n = x.size
        mean = float(np.mean(x))
        var = float(np.var(x, ddof=1)) if n > 1 else 0.0
        half = 6.0 * np.sqrt(var / n)
        if not half > 0:
            half = 1.0
        bounds = [(mean - half, mean + half)]
        if self.p == 2:
            base = var if var > 0 else 1.0
            bounds.append((0.2 * base, 5.0 * base))
        return bounds


def recipe_model(outcome: str, recipe: Sequence[str], name: Optional[str] = None) -> MomentModel:
    """Config-defined model over an outcome column"""
    return MomentModel(name or "recipe", outcome, recipe)


def central_moments_model(column: str = "x") -> MomentModel:
    """theta = (mu, sigma2) with mean, variance and zero-skewness moments (q = 3)"""
    return MomentModel("central-moments", column, [LEVEL, SQUARE, CUBE])


def instrumented_mean_model(outcome: str = "mpd", instrument: str = "days") -> MomentModel:
    """theta = mu with the level moment and its product with an instrument (q = 2)"""
    return MomentModel("instrumented-mean", outcome, [LEVEL, PRODUCT_PREFIX + instrument])


def mean_only_model(column: str = "x") -> MomentModel:
    """Just-identified mean model (q = p = 1)"""
    return MomentModel("mean-only", column, [LEVEL])


def check_jacobian(model: MomentModel, dataset: Dataset, theta, step: float = 1e-6) -> float:
    """
    Largest relative deviation of the analytic Jacobian from central differences

    Returns:
        max |G - G_fd| / max(1, |G|) over all observations and entries
    """
    theta = np.asarray(theta, dtype=float).ravel()
    analytic = model.jacobian(dataset, theta)
    numeric = np.empty_like(analytic)
    for k in range(model.p):
        h = step * max(1.0, abs(theta[k]))
        up = theta.copy()
        down = theta.copy()
        up[k] += h
        down[k] -= h
        numeric[:, :, k] = (model.moments(dataset, up) - model.moments(dataset, down)) / (2.0 * h)
    scale = np.maximum(1.0, np.abs(analytic))
    worst = float(np.max(np.abs(analytic - numeric) / scale))
    logger.debug("Jacobian self-test for %s: max relative error %.3e", model.name, worst)
    return worst


MODEL_FACTORIES = {
    "central-moments": central_moments_model,
    "instrumented-mean": instrumented_mean_model,
    "mean-only": mean_only_model,
}


def model_from_binding(binding: ModelBinding) -> MomentModel:
    """
    Build the model a run configuration names

    Raises:
        ConfigError: For an unknown model name or an instrument on a model without one
    """
    if binding.name == "recipe":
        return recipe_model(binding.outcome or "x", binding.recipe)
    if binding.name not in MODEL_FACTORIES:
        raise ConfigError(
            f"Unknown model '{binding.name}'. Choose one of: {', '.join(list(MODEL_FACTORIES) + ['recipe'])}"
        )
    if binding.name == "instrumented-mean":
        return instrumented_mean_model(binding.outcome or "mpd", binding.instrument or "days")
    if binding.instrument is not None:
        raise ConfigError(f"model '{binding.name}' takes no instrument column")
    return MODEL_FACTORIES[binding.name](binding.outcome or "x")
