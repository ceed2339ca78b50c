import math
from enum import Enum
from typing import Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from crpd.core.config import settings


class Branch(str, Enum):
    """Evaluation branch of the power family"""
    ET = "et"            # exponential tilting limit, gamma -> 0
    EL = "el"            # empirical likelihood limit, gamma -> -1
    GENERIC = "generic"


class Gamma(BaseModel):
    """CRPD power parameter"""
    model_config = ConfigDict(frozen=True)

    value: float = Field(..., description="Dimensionless power parameter")

    @field_validator("value")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("gamma must be a finite real")
        return float(value)

    @property
    def branch(self) -> Branch:
        if abs(self.value) <= settings.BRANCH_EPS:
            return Branch.ET
        if abs(self.value + 1.0) <= settings.BRANCH_EPS:
            return Branch.EL
        return Branch.GENERIC

    @classmethod
    def of(cls, value: Union["Gamma", float]) -> "Gamma":
        if isinstance(value, Gamma):
            return value
        return cls(value=float(value))

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return f"{self.value:g}"
