from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from crpd.models.diagnostics import SecondOrderReport
from crpd.models.gamma import Gamma
from crpd.models.solver import MultiplierState
from crpd.models.types import FloatArray


class SearchConfig(BaseModel):
    """Grid-plus-refinement search over the parameter box"""
    model_config = ConfigDict(frozen=True)

    grid_points_per_dim: int = Field(41, ge=3, description="Grid points per parameter dimension (odd)")
    refine_rounds: int = Field(3, ge=0, description="Refinement rounds after the initial grid")
    refine_shrink: float = Field(0.2, gt=0, lt=1, description="Box width ratio between rounds")
    bounds: Optional[List[Tuple[float, float]]] = Field(
        None, description="Parameter box; defaults to the model's data-driven box"
    )
    polish: bool = Field(True, description="Bounded Nelder-Mead polish inside the final box")

    @field_validator("grid_points_per_dim")
    @classmethod
    def _odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("grid_points_per_dim must be odd so the box center is on the grid")
        return value

    @field_validator("bounds")
    @classmethod
    def _ordered(cls, value):
        if value is not None:
            for lo, hi in value:
                if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                    raise ValueError(f"invalid bound pair ({lo}, {hi})")
        return value


class EstimationResult(BaseModel):
    """One full CRPD fit"""
    model_config = ConfigDict(frozen=True)

    theta_hat: FloatArray
    parameter_names: Tuple[str, ...]
    multipliers: MultiplierState
    weights: FloatArray
    divergence_value: float
    std_errors: FloatArray
    cov_theta: FloatArray
    ci_level: float
    ci: FloatArray = Field(..., description="p x 2 matrix of (lower, upper) bounds")
    gamma: Gamma
    objective_evals: int
    n: int
    weighted_outcome_mean: Optional[float] = Field(
        None, description="sum of pi_i * outcome_i for one-parameter mean models"
    )
    diagnostics: Optional[SecondOrderReport] = None
