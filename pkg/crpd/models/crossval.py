from enum import Enum
from typing import Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from crpd.models.estimation import EstimationResult
from crpd.models.gamma import Gamma


class CvLoss(str, Enum):
    MOMENT_INSTABILITY = "moment_instability"
    PREDICTION_MSE = "prediction_mse"


def default_gamma_grid() -> List[float]:
    return [round(v, 10) for v in np.linspace(-2.0, 2.0, 81)]


class CvConfig(BaseModel):
    """K-fold cross-validation over a grid of power parameters"""
    model_config = ConfigDict(frozen=True)

    gamma_grid: List[float] = Field(default_factory=default_gamma_grid, description="Strictly increasing candidates")
    folds: int = Field(5, ge=2, description="Number of folds K")
    loss: CvLoss = Field(CvLoss.MOMENT_INSTABILITY, description="Validation loss")
    seed: int = Field(0, ge=0, description="Fold permutation seed")
    shuffle: bool = Field(True, description="Permute rows before splitting")
    allow_large_grid: bool = Field(False, description="Permit grids above settings.MAX_CV_GRID")

    @field_validator("gamma_grid")
    @classmethod
    def _increasing(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("gamma grid must be nonempty")
        if any(not np.isfinite(v) for v in value):
            raise ValueError("gamma grid must be finite")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("gamma grid must be strictly increasing")
        return value

    @property
    def gammas(self) -> List[Gamma]:
        return [Gamma.of(v) for v in self.gamma_grid]


class CvReport(BaseModel):
    """Cross-validation output: loss curve, selection and full-sample refit"""
    model_config = ConfigDict(frozen=True)

    per_gamma_loss: Dict[Gamma, float] = Field(
        ..., description="Mean validation loss over successful folds (nan if none)"
    )
    fold_losses: Dict[Gamma, List[float]] = Field(..., description="Per-fold losses, nan for failed folds")
    failures: Dict[Gamma, int] = Field(..., description="Failed folds per gamma")
    selected_gamma: Gamma
    fold_assignments: List[int]
    loss: CvLoss
    refit: EstimationResult
