from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from crpd.models.types import FloatArray


class WeightSummary(BaseModel):
    """Six-number summary of an implied weight vector"""
    model_config = ConfigDict(frozen=True)

    minimum: float
    q1: float
    median: float
    mean: float
    q3: float
    maximum: float

    def as_tuple(self) -> tuple:
        return (self.minimum, self.q1, self.median, self.mean, self.q3, self.maximum)


class SecondOrderReport(BaseModel):
    """Second-order multiplier quantities and weight diagnostics for one fit"""
    model_config = ConfigDict(frozen=True)

    b_lambda: FloatArray = Field(..., description="Second-order multiplier correction B_lambda,n(gamma)")
    lambda_first_order: FloatArray = Field(..., description="First-order multiplier Omega^-1 g_bar")
    theta_bias_partial: FloatArray = Field(
        ..., description="Partial second-order parameter term G_bar' B_lambda (multiplier channel only)"
    )
    delta_stat: float = Field(..., description="n times the shifted adding-up multiplier")
    delta_stat_scaled: Optional[float] = Field(
        None, description="delta_stat / (-(gamma+1)/2); absent on the empirical likelihood branch"
    )
    weight_summary: WeightSummary
    evaluated_at: str = Field("theta_hat", description="Parameter value the moments were evaluated at")
