"""
Dairy-cow fixture (milk per day over 22 cows) used by the empirical checks.

The raw records are not shipped; a user supplied CSV is accepted only if it
reproduces the published descriptive statistics.
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np

from crpd.core.exceptions import FixtureMismatch
from crpd.models.dataset import ColumnSummary, Dataset
from crpd.utils.csv_io import parse_csv

logger = logging.getLogger(__name__)

OWEN_COLUMN = "mpd"
OWEN_SUMMARY = ColumnSummary(column=OWEN_COLUMN, n=22, mean=12.4250, sd=3.0750, minimum=7.5470, maximum=18.6610)
OWEN_TOLERANCE = 1e-4


def describe_column(dataset: Dataset, column: str) -> ColumnSummary:
    """n, mean, SD (n - 1 denominator), min and max of one column"""
    x = dataset.column(column)
    return ColumnSummary(
        column=column,
        n=x.size,
        mean=float(np.mean(x)),
        sd=float(np.std(x, ddof=1)) if x.size > 1 else 0.0,
        minimum=float(np.min(x)),
        maximum=float(np.max(x)),
    )


def load_owen_fixture(path: Union[str, Path]) -> Dataset:
    """
    Load the dairy fixture, deriving ``mpd = milk_lbs / days`` when absent

    Raises:
        FixtureMismatch: If the descriptive statistics differ from the published ones
    """
    dataset = parse_csv(path)
    if not dataset.has_column(OWEN_COLUMN):
        if not (dataset.has_column("milk_lbs") and dataset.has_column("days")):
            raise FixtureMismatch("fixture needs an mpd column or milk_lbs and days columns")
        data = {name: dataset.column(name) for name in dataset.columns}
        data[OWEN_COLUMN] = dataset.column("milk_lbs") / dataset.column("days")
        dataset = Dataset.from_columns(data)

    summary = describe_column(dataset, OWEN_COLUMN)
    if summary.n != OWEN_SUMMARY.n:
        raise FixtureMismatch(f"expected {OWEN_SUMMARY.n} records, found {summary.n}")
    for field in ("mean", "sd", "minimum", "maximum"):
        got, expected = getattr(summary, field), getattr(OWEN_SUMMARY, field)
        if abs(got - expected) > OWEN_TOLERANCE:
            raise FixtureMismatch(f"{OWEN_COLUMN} {field} is {got:.4f}, expected {expected:.4f}")
    logger.info("Loaded dairy fixture from %s", path)
    return dataset
