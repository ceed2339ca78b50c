import os
from enum import Enum
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from crpd.core.config import settings
from crpd.models.crossval import CvConfig
from crpd.models.estimation import SearchConfig
from crpd.models.simulation import SimulationConfig
from crpd.models.solver import SolverConfig


class Command(str, Enum):
    ESTIMATE = "estimate"
    CROSSVAL = "crossval"
    SIMULATE = "simulate"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class ModelBinding(BaseModel):
    """Model selector plus the dataset columns it reads"""
    model_config = ConfigDict(frozen=True)

    name: str = Field("central-moments", description="central-moments, instrumented-mean, mean-only or recipe")
    outcome: Optional[str] = Field(None, description="Outcome column; each model has its own default")
    instrument: Optional[str] = Field(None, description="Instrument column of instrumented-mean")
    recipe: Optional[List[str]] = Field(None, description="Recipe terms for name = recipe")

    @model_validator(mode="after")
    def _recipe_present(self) -> "ModelBinding":
        if self.name == "recipe" and not self.recipe:
            raise ValueError("model 'recipe' needs recipe terms")
        if self.name != "recipe" and self.recipe:
            raise ValueError(f"recipe terms only apply to model 'recipe', not '{self.name}'")
        return self


class RunConfig(BaseModel):
    """Everything one command line invocation needs"""
    model_config = ConfigDict(frozen=True)

    command: Command
    model: ModelBinding = Field(default_factory=ModelBinding)
    gamma: Optional[float] = None
    cv: Optional[CvConfig] = None
    simulation: Optional[List[SimulationConfig]] = None
    search: SearchConfig = Field(default_factory=SearchConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    output_format: OutputFormat = OutputFormat.CSV
    ci_level: float = Field(settings.CI_LEVEL, gt=0, lt=1)
    include_weights: bool = False

    @model_validator(mode="after")
    def _complete(self) -> "RunConfig":
        if self.command == Command.ESTIMATE and self.gamma is None:
            raise ValueError("estimate needs a gamma")
        if self.command == Command.CROSSVAL and self.cv is None:
            raise ValueError("crossval needs a cross-validation config")
        if self.command == Command.SIMULATE and not self.simulation:
            raise ValueError("simulate needs at least one design")
        if self.command in (Command.ESTIMATE, Command.CROSSVAL):
            if self.input_path is None:
                raise ValueError(f"{self.command.value} needs an input file")
            if not self.input_path.is_file() or not os.access(self.input_path, os.R_OK):
                raise ValueError(f"input file '{self.input_path}' is not readable")
        if self.output_path is not None:
            parent = self.output_path.parent if str(self.output_path.parent) else Path(".")
            if not parent.is_dir() or not os.access(parent, os.W_OK):
                raise ValueError(f"output directory '{parent}' is not writable")
        return self
