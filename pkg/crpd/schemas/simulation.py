from typing import List, Literal

from pydantic import BaseModel, Field

from crpd.core.config import settings
from crpd.models.simulation import SimulationConfig, SimulationRow


class SimulationDocument(BaseModel):
    """Output document of the simulate command"""
    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION)
    command: Literal["simulate"] = "simulate"
    designs: List[SimulationConfig]
    rows: List[SimulationRow] = Field(..., description="One row per (dgp, n, gamma) cell")
