from pathlib import Path

import numpy as np
import pytest

from crpd.models.dataset import Dataset
from crpd.models.estimation import SearchConfig

FIXTURES = Path(__file__).parent / "fixtures"
OWEN_PATH = FIXTURES / "owen_dairy.csv"


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def normal_dataset(rng):
    """50 standard normal draws in column x"""
    return Dataset.from_columns({"x": rng.standard_normal(50)})


@pytest.fixture
def instrument_dataset(rng):
    """Outcome mpd and a positive instrument days, n = 30"""
    days = rng.uniform(200.0, 400.0, 30)
    mpd = 12.0 + rng.standard_normal(30)
    return Dataset.from_columns({"mpd": mpd, "days": days})


@pytest.fixture
def demeaned_moments(rng):
    """n x q moment matrix with column means exactly zero"""
    g = rng.standard_normal((40, 3))
    return g - g.mean(axis=0)


@pytest.fixture
def coarse_search():
    """Cheaper outer search for two-parameter fits"""
    return SearchConfig(grid_points_per_dim=11, refine_rounds=3)


@pytest.fixture
def owen_path():
    if not OWEN_PATH.exists():
        pytest.skip("dairy fixture tests/fixtures/owen_dairy.csv is not available")
    return OWEN_PATH
