from typing import Dict, Iterable, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from crpd.core.exceptions import MissingColumn
from crpd.models.types import FloatArray


class Dataset(BaseModel):
    """
    An i.i.d. sample: n rows of fixed-width real vectors with named columns
    """
    model_config = ConfigDict(frozen=True)

    columns: Tuple[str, ...] = Field(..., description="Column names in file order")
    values: FloatArray = Field(..., description="n x k matrix of observations")

    @model_validator(mode="after")
    def _check_shape(self) -> "Dataset":
        if self.values.ndim != 2:
            raise ValueError("values must be a 2-D matrix")
        if self.values.shape[1] != len(self.columns):
            raise ValueError(
                f"{len(self.columns)} column names for {self.values.shape[1]} value columns"
            )
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("column names must be unique")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("dataset contains non-finite entries")
        return self

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def has_column(self, name: str) -> bool:
        return name in self.columns

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise MissingColumn(
                f"Column '{name}' not found. Available columns: {', '.join(self.columns)}"
            )
        return self.values[:, self.columns.index(name)]

    def subset(self, indices: Iterable[int]) -> "Dataset":
        """Rows at the given positions, in the given order"""
        rows = np.asarray(list(indices), dtype=int)
        return Dataset(columns=self.columns, values=self.values[rows])

    @classmethod
    def from_columns(cls, data: Dict[str, Iterable[float]]) -> "Dataset":
        names = tuple(data.keys())
        matrix = np.column_stack([np.asarray(list(data[name]), dtype=float) for name in names])
        return cls(columns=names, values=matrix)


class ColumnSummary(BaseModel):
    """Descriptive statistics of one column"""
    model_config = ConfigDict(frozen=True)

    column: str
    n: int
    mean: float
    sd: float
    minimum: float
    maximum: float
