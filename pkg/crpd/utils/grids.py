import math
from typing import List, Tuple

from crpd.core.exceptions import ConfigError

# decimals kept on grid points so that lo + i*step lands on the intended values
GRID_DECIMALS = 10


def _number(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{what} '{text}' is not a number")
    if not math.isfinite(value):
        raise ConfigError(f"{what} '{text}' is not finite")
    return value


def parse_grid(text: str) -> List[float]:
    """
    Expand ``lo:hi:step`` (or a single number) into an increasing grid

    Raises:
        ConfigError: On malformed syntax, non-positive step or a range that is not a whole number of steps
    """
    parts = text.strip().split(":")
    if len(parts) == 1:
        return [_number(parts[0], "grid value")]
    if len(parts) != 3:
        raise ConfigError(f"grid '{text}' must look like lo:hi:step")
    lo, hi, step = (_number(p, "grid bound") for p in parts)
    if step <= 0:
        raise ConfigError(f"grid step must be positive, got {step}")
    if hi < lo:
        raise ConfigError(f"grid upper end {hi} is below lower end {lo}")
    steps = (hi - lo) / step
    count = round(steps)
    if abs(steps - count) > 1e-9 * max(1.0, steps):
        raise ConfigError(f"range {lo}..{hi} is not a whole number of steps of {step}")
    return [round(lo + i * step, GRID_DECIMALS) for i in range(count + 1)]


def parse_bounds(text: str) -> List[Tuple[float, float]]:
    """``lo:hi[,lo:hi...]`` into bound pairs, one per parameter"""
    bounds = []
    for pair in text.split(","):
        parts = pair.strip().split(":")
        if len(parts) != 2:
            raise ConfigError(f"bounds '{pair}' must look like lo:hi")
        lo, hi = (_number(p, "bound") for p in parts)
        if not lo < hi:
            raise ConfigError(f"bounds '{pair}' need lo < hi")
        bounds.append((lo, hi))
    return bounds


def parse_recipe(text: str) -> List[str]:
    return [term.strip() for term in text.split(",") if term.strip()]
