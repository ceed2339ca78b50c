import argparse
import logging

import pandas as pd

from crpd.models.gamma import Gamma
from crpd.models.run_config import Command, OutputFormat, RunConfig
from crpd.schemas import EstimationDocument
from crpd.services.estimation import EstimationService
from crpd.services.moments import model_from_binding
from crpd.utils.csv_io import parse_csv

from .common import (
    add_io_arguments,
    add_model_arguments,
    add_search_arguments,
    binding_from_args,
    emit,
    emit_tables,
    search_from_args,
)

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("estimate", help="Fit a moment model at one gamma")
    add_io_arguments(parser)
    add_model_arguments(parser, default="mean-only")
    add_search_arguments(parser)
    parser.add_argument("--gamma", type=float, required=True, help="Power parameter")
    parser.add_argument("--weights", action="store_true", help="Also emit the implied probabilities")
    parser.set_defaults(build_config=build_config)


def build_config(args: argparse.Namespace) -> RunConfig:
    search, solver = search_from_args(args)
    return RunConfig(
        command=Command.ESTIMATE,
        model=binding_from_args(args),
        gamma=args.gamma,
        search=search,
        solver=solver,
        input_path=args.input,
        output_path=args.output,
        output_format=OutputFormat(args.format),
        ci_level=args.ci_level,
        include_weights=args.weights,
    )


def run_estimate(config: RunConfig) -> int:
    """
    Fit the configured model and emit its EstimationDocument

    CSV output is one row per parameter; with weights requested a second table
    holds the implied probabilities.
    """
    dataset = parse_csv(config.input_path)
    model = model_from_binding(config.model)
    service = EstimationService(config.search, config.solver, config.ci_level)
    result = service.fit(dataset, model, Gamma.of(config.gamma))
    document = EstimationDocument.from_result(result, model, config.include_weights)

    if config.output_format == OutputFormat.JSON:
        emit(config.output_path, document.model_dump_json(indent=2) + "\n")
        return 0
    tables = [("estimate", document.to_frame())]
    if config.include_weights:
        tables.append(("weights", pd.DataFrame({"row": range(1, len(document.weights) + 1), "pi": document.weights})))
    emit_tables(config.output_path, tables)
    return 0
