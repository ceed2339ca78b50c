from pydantic import BaseModel, ConfigDict, Field

from crpd.core.config import settings
from crpd.models.types import FloatArray


class SolverConfig(BaseModel):
    """Settings of the safeguarded Newton solve for the multipliers"""
    model_config = ConfigDict(frozen=True)

    tol_inner: float = Field(1e-10, gt=0, description="Tolerance on the sup-norm of the stacked residual")
    max_iter: int = Field(100, gt=0, description="Maximum Newton iterations")
    kappa_pos: float = Field(settings.KAPPA_POS, gt=0, description="Positivity floor for the index argument")
    backtrack_factor: float = Field(0.5, gt=0, lt=1, description="Step shrink factor while backtracking")
    max_backtracks: int = Field(40, gt=0, description="Maximum step halvings per iteration")


class MultiplierState(BaseModel):
    """
    Inner dual solution at a fixed parameter value.

    ``delta_shift`` stores the shifted adding-up multiplier delta - delta_0,
    which stays finite on every branch including empirical likelihood.
    """
    model_config = ConfigDict(frozen=True)

    lam: FloatArray = Field(..., description="Moment multiplier (q-vector)")
    delta_shift: float = Field(..., description="Adding-up multiplier minus its population value")
    weights: FloatArray = Field(..., description="Implied observation probabilities")
    residual_norm: float = Field(..., description="Sup-norm of the stacked residual")
    iterations: int = Field(
        ..., ge=0, description="Newton steps taken; 0 when the starting point already meets the tolerance"
    )
    converged: bool = Field(..., description="Whether the residual met the tolerance")
