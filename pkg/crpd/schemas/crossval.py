import math
from typing import List, Literal, Optional

import pandas as pd
from pydantic import BaseModel, Field

from crpd.core.config import settings
from crpd.models.crossval import CvReport
from crpd.services.moments import MomentModel

from .estimation import EstimationDocument

# Column order of the loss-curve CSV
CURVE_COLUMNS = ["gamma", "loss", "failures", "selected"]


def _finite_or_none(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None


class CvCurvePoint(BaseModel):
    gamma: float
    loss: Optional[float] = Field(..., description="Mean held-out loss over successful folds")
    failures: int
    fold_losses: List[Optional[float]] = Field(..., description="Per-fold losses, null where the fit failed")


class CvDocument(BaseModel):
    """Output document of the crossval command"""
    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION)
    command: Literal["crossval"] = "crossval"
    model: str
    loss: str
    folds: int
    selected_gamma: float
    fold_assignments: List[int]
    curve: List[CvCurvePoint]
    refit: EstimationDocument

    @classmethod
    def from_report(cls, report: CvReport, model: MomentModel, include_weights: bool = False) -> "CvDocument":
        curve = [
            CvCurvePoint(
                gamma=gamma.value,
                loss=_finite_or_none(loss),
                failures=report.failures[gamma],
                fold_losses=[_finite_or_none(v) for v in report.fold_losses[gamma]],
            )
            for gamma, loss in report.per_gamma_loss.items()
        ]
        return cls(
            model=model.name,
            loss=report.loss.value,
            folds=max(report.fold_assignments) + 1,
            selected_gamma=report.selected_gamma.value,
            fold_assignments=report.fold_assignments,
            curve=curve,
            refit=EstimationDocument.from_result(report.refit, model, include_weights),
        )

    def curve_frame(self) -> pd.DataFrame:
        """Loss curve, one row per gamma"""
        rows = [
            {
                "gamma": point.gamma,
                "loss": point.loss,
                "failures": point.failures,
                "selected": int(point.gamma == self.selected_gamma),
            }
            for point in self.curve
        ]
        return pd.DataFrame(rows, columns=CURVE_COLUMNS)
