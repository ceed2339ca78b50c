"""
Arguments and output plumbing shared by the subcommands.
"""

import argparse
import re
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd

from crpd.core.config import settings
from crpd.core.exceptions import UsageError
from crpd.models.estimation import SearchConfig
from crpd.models.run_config import ModelBinding, OutputFormat
from crpd.models.solver import SolverConfig
from crpd.services.moments import MODEL_FACTORIES
from crpd.utils.grids import parse_bounds, parse_recipe


class ArgumentParser(argparse.ArgumentParser):
    """Parser that raises UsageError instead of exiting"""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # values such as -2:2:0.05 or -1:1,0.5:2 are arguments, not options
        self._negative_number_matcher = re.compile(r"^-\.?\d")

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def add_io_arguments(parser: argparse.ArgumentParser, needs_input: bool = True) -> None:
    parser.add_argument("--input", type=Path, required=needs_input, help="Input CSV with a header row")
    parser.add_argument("--output", type=Path, help="Output file; stdout when omitted")
    parser.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default=OutputFormat.CSV.value, help="Output format"
    )
    parser.add_argument("--log-level", default=None, help=f"Logging level (default {settings.LOG_LEVEL})")


def add_model_arguments(parser: argparse.ArgumentParser, default: str) -> None:
    parser.add_argument("--model", choices=list(MODEL_FACTORIES) + ["recipe"], default=default)
    parser.add_argument("--outcome", help="Outcome column")
    parser.add_argument("--instrument", help="Instrument column (instrumented-mean)")
    parser.add_argument("--recipe", help="Comma separated recipe terms, e.g. level,square,product:z")


def add_search_arguments(parser: argparse.ArgumentParser, grid_points: int = 41) -> None:
    parser.add_argument("--bounds", help="Parameter box lo:hi[,lo:hi]")
    parser.add_argument("--grid-points", type=int, default=grid_points, help="Odd number of grid points per parameter")
    parser.add_argument("--refine-rounds", type=int, default=3)
    parser.add_argument("--no-polish", action="store_true", help="Skip the Nelder-Mead polish")
    parser.add_argument("--ci-level", type=float, default=settings.CI_LEVEL)
    parser.add_argument("--tol-inner", type=float, default=1e-10)
    parser.add_argument("--max-iter", type=int, default=100)


def binding_from_args(args: argparse.Namespace) -> ModelBinding:
    return ModelBinding(
        name=args.model,
        outcome=args.outcome,
        instrument=args.instrument,
        recipe=parse_recipe(args.recipe) if args.recipe else None,
    )


def search_from_args(args: argparse.Namespace) -> Tuple[SearchConfig, SolverConfig]:
    search = SearchConfig(
        grid_points_per_dim=args.grid_points,
        refine_rounds=args.refine_rounds,
        bounds=parse_bounds(args.bounds) if args.bounds else None,
        polish=not args.no_polish,
    )
    solver = SolverConfig(tol_inner=args.tol_inner, max_iter=args.max_iter)
    return search, solver


def frame_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


def emit(path: Optional[Path], text: str) -> None:
    """Write text to path, or to stdout when no path is given"""
    if path is None:
        sys.stdout.write(text)
        return
    path.write_text(text, encoding="utf-8")


def emit_tables(path: Optional[Path], tables: List[Tuple[str, pd.DataFrame]]) -> None:
    """
    Emit the first table at path and each further table at ``<stem>.<suffix>.csv``

    On stdout the tables follow each other separated by a blank line.
    """
    if path is None:
        sys.stdout.write("\n".join(frame_to_csv(frame) for _, frame in tables))
        return
    _, main = tables[0]
    emit(path, frame_to_csv(main))
    for suffix, frame in tables[1:]:
        emit(sibling(path, suffix), frame_to_csv(frame))


def sibling(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}.{suffix}{path.suffix or '.csv'}")
