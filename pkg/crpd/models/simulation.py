from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from crpd.core.config import settings
from crpd.models.estimation import SearchConfig
from crpd.models.solver import SolverConfig


class DgpKind(str, Enum):
    STUDENT_T = "student_t"
    NORMAL = "normal"


class DgpSpec(BaseModel):
    """Symmetric data-generating process with mean zero"""
    model_config = ConfigDict(frozen=True)

    kind: DgpKind
    df: Optional[float] = Field(None, description="Degrees of freedom (student_t only)")
    mu0: float = 0.0

    @model_validator(mode="after")
    def _check_df(self) -> "DgpSpec":
        if self.kind == DgpKind.STUDENT_T:
            if self.df is None or not self.df > 2:
                raise ValueError("student_t requires df > 2 so the variance exists")
        elif self.df is not None:
            raise ValueError("df applies to student_t only")
        return self

    @property
    def var0(self) -> float:
        if self.kind == DgpKind.STUDENT_T:
            return self.df / (self.df - 2.0)
        return 1.0

    @property
    def label(self) -> str:
        if self.kind == DgpKind.STUDENT_T:
            return f"t{self.df:g}"
        return "normal"


def default_simulation_grid() -> List[float]:
    return [round(v, 10) for v in np.linspace(-1.0, 1.0, 9)]


class SimulationConfig(BaseModel):
    """One (DGP, n) design cell family, evaluated across a gamma grid"""
    model_config = ConfigDict(frozen=True)

    dgp: DgpSpec
    n: int = Field(..., ge=5, description="Sample size")
    gamma_grid: List[float] = Field(default_factory=default_simulation_grid)
    replications: int = Field(1000, ge=1)
    seed: int = Field(0, ge=0)
    ci_level: float = Field(settings.CI_LEVEL, gt=0, lt=1)
    search: SearchConfig = Field(default_factory=SearchConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)


class ReplicationOutcome(BaseModel):
    """Per-replication record kept for aggregation"""
    model_config = ConfigDict(frozen=True)

    replication: int
    ok: bool
    error: Optional[str] = None
    mu_hat: float = float("nan")
    sigma2_hat: float = float("nan")
    se_mu: float = float("nan")
    covered: bool = False
    lam: List[float] = Field(default_factory=list)
    delta_shift: float = float("nan")
    weight_summary: List[float] = Field(default_factory=list)


class SimulationRow(BaseModel):
    """Aggregated metrics for one (DGP, n, gamma) cell"""
    model_config = ConfigDict(frozen=True)

    dgp: str
    n: int
    gamma: float
    replications_used: int
    failures: int
    bias: float
    mse: float
    coverage_distortion: float
    empirical_sd: Optional[float]
    mean_se: float
    ratio: Optional[float]
    sigma2_bias: float
    sigma2_mse: float
    lambda_mean: List[float]
    lambda_sd: List[Optional[float]]
    delta_mean: float
    delta_sd: Optional[float]
    weight_mean: List[float] = Field(..., description="Means of min, Q1, median, mean, Q3, max")
    weight_sd: List[Optional[float]]
