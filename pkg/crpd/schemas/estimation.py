from typing import List, Literal, Optional

import pandas as pd
from pydantic import BaseModel, Field

from crpd.core.config import settings
from crpd.models.diagnostics import WeightSummary
from crpd.models.estimation import EstimationResult
from crpd.services.diagnostics import weight_summary
from crpd.services.moments import MomentModel

# Column order of the estimate CSV table
ESTIMATE_COLUMNS = [
    "parameter", "estimate", "std_error", "ci_lower", "ci_upper",
    "gamma", "n", "divergence_value", "delta_shift", "objective_evals",
]


class ParameterEstimate(BaseModel):
    """Point estimate and Wald interval of one parameter"""
    name: str = Field(..., description="Parameter name")
    estimate: float
    std_error: float
    ci_lower: float
    ci_upper: float


class MultiplierOutput(BaseModel):
    lam: List[float] = Field(..., description="Moment multiplier at theta_hat")
    delta_shift: float = Field(..., description="Adding-up multiplier minus its population value")
    residual_norm: float
    iterations: int


class DiagnosticsOutput(BaseModel):
    b_lambda: List[float]
    lambda_first_order: List[float]
    theta_bias_partial: List[float]
    delta_stat: float
    delta_stat_scaled: Optional[float] = None
    evaluated_at: str


class EstimationDocument(BaseModel):
    """Output document of the estimate command"""
    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION)
    command: Literal["estimate"] = "estimate"
    model: str
    outcome: str
    recipe: List[str]
    gamma: float
    n: int
    ci_level: float
    parameters: List[ParameterEstimate]
    covariance: List[List[float]]
    divergence_value: float
    objective_evals: int
    multipliers: MultiplierOutput
    weighted_outcome_mean: Optional[float] = None
    weight_summary: WeightSummary
    diagnostics: Optional[DiagnosticsOutput] = None
    weights: Optional[List[float]] = Field(None, description="Implied probabilities, when requested")

    @classmethod
    def from_result(cls, result: EstimationResult, model: MomentModel,
                    include_weights: bool = False) -> "EstimationDocument":
        parameters = [
            ParameterEstimate(
                name=name,
                estimate=float(result.theta_hat[j]),
                std_error=float(result.std_errors[j]),
                ci_lower=float(result.ci[j, 0]),
                ci_upper=float(result.ci[j, 1]),
            )
            for j, name in enumerate(result.parameter_names)
        ]
        report = result.diagnostics
        diagnostics = None
        if report is not None:
            diagnostics = DiagnosticsOutput(
                b_lambda=report.b_lambda.tolist(),
                lambda_first_order=report.lambda_first_order.tolist(),
                theta_bias_partial=report.theta_bias_partial.tolist(),
                delta_stat=report.delta_stat,
                delta_stat_scaled=report.delta_stat_scaled,
                evaluated_at=report.evaluated_at,
            )
        state = result.multipliers
        return cls(
            model=model.name,
            outcome=model.outcome,
            recipe=list(model.recipe),
            gamma=result.gamma.value,
            n=result.n,
            ci_level=result.ci_level,
            parameters=parameters,
            covariance=result.cov_theta.tolist(),
            divergence_value=result.divergence_value,
            objective_evals=result.objective_evals,
            multipliers=MultiplierOutput(
                lam=state.lam.tolist(),
                delta_shift=state.delta_shift,
                residual_norm=state.residual_norm,
                iterations=state.iterations,
            ),
            weighted_outcome_mean=result.weighted_outcome_mean,
            weight_summary=report.weight_summary if report is not None else weight_summary(result.weights),
            diagnostics=diagnostics,
            weights=result.weights.tolist() if include_weights else None,
        )

    def to_frame(self) -> pd.DataFrame:
        """One row per parameter"""
        rows = [
            {
                "parameter": p.name,
                "estimate": p.estimate,
                "std_error": p.std_error,
                "ci_lower": p.ci_lower,
                "ci_upper": p.ci_upper,
                "gamma": self.gamma,
                "n": self.n,
                "divergence_value": self.divergence_value,
                "delta_shift": self.multipliers.delta_shift,
                "objective_evals": self.objective_evals,
            }
            for p in self.parameters
        ]
        return pd.DataFrame(rows, columns=ESTIMATE_COLUMNS)

