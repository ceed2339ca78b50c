import argparse

from crpd.models.crossval import CvConfig, CvLoss
from crpd.models.run_config import Command, OutputFormat, RunConfig
from crpd.schemas import CvDocument
from crpd.services.crossval import select_gamma
from crpd.services.moments import model_from_binding
from crpd.utils.csv_io import parse_csv
from crpd.utils.grids import parse_grid

from .common import (
    add_io_arguments,
    add_model_arguments,
    add_search_arguments,
    binding_from_args,
    emit,
    emit_tables,
    search_from_args,
)


def register(subparsers) -> None:
    parser = subparsers.add_parser("crossval", help="Choose gamma by K-fold cross-validation")
    add_io_arguments(parser)
    add_model_arguments(parser, default="mean-only")
    add_search_arguments(parser)
    parser.add_argument("--grid", default="-2:2:0.05", help="Gamma grid lo:hi:step")
    parser.add_argument("--folds", type=int, default=5)
    parser.add_argument(
        "--loss",
        choices=[loss.value.replace("_", "-") for loss in CvLoss],
        default=CvLoss.MOMENT_INSTABILITY.value.replace("_", "-"),
    )
    parser.add_argument("--seed", type=int, default=0, help="Fold permutation seed")
    parser.add_argument("--no-shuffle", action="store_true", help="Split rows in file order")
    parser.add_argument("--allow-large-grid", action="store_true", help="Permit very long gamma grids")
    parser.add_argument("--weights", action="store_true", help="Include refit probabilities in JSON output")
    parser.set_defaults(build_config=build_config)


def build_config(args: argparse.Namespace) -> RunConfig:
    search, solver = search_from_args(args)
    cv = CvConfig(
        gamma_grid=parse_grid(args.grid),
        folds=args.folds,
        loss=CvLoss(args.loss.replace("-", "_")),
        seed=args.seed,
        shuffle=not args.no_shuffle,
        allow_large_grid=args.allow_large_grid,
    )
    return RunConfig(
        command=Command.CROSSVAL,
        model=binding_from_args(args),
        cv=cv,
        search=search,
        solver=solver,
        input_path=args.input,
        output_path=args.output,
        output_format=OutputFormat(args.format),
        ci_level=args.ci_level,
        include_weights=args.weights,
    )


def run_crossval(config: RunConfig) -> int:
    """Emit the loss curve and the refit at the selected gamma"""
    dataset = parse_csv(config.input_path)
    model = model_from_binding(config.model)
    report = select_gamma(dataset, model, config.cv, config.search, config.solver)
    document = CvDocument.from_report(report, model, config.include_weights)

    if config.output_format == OutputFormat.JSON:
        emit(config.output_path, document.model_dump_json(indent=2) + "\n")
    else:
        emit_tables(config.output_path, [("curve", document.curve_frame()), ("refit", document.refit.to_frame())])
    return 0
