import argparse

from crpd.models.run_config import Command, OutputFormat, RunConfig
from crpd.models.simulation import DgpKind, DgpSpec, SimulationConfig
from crpd.schemas import SimulationDocument
from crpd.services.simulation import metrics_frame, multipliers_frame, run_study
from crpd.utils.grids import parse_grid

from .common import add_io_arguments, add_search_arguments, emit, emit_tables, search_from_args

DEFAULT_T_DF = 5.0


def register(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="Monte Carlo study of the central-moments model")
    add_io_arguments(parser, needs_input=False)
    add_search_arguments(parser)
    parser.add_argument("--dgp", choices=["normal", "t"], default="normal")
    parser.add_argument("--df", type=float, help=f"Degrees of freedom of the t DGP (default {DEFAULT_T_DF:g})")
    parser.add_argument("--n", type=int, nargs="+", default=[50], help="Sample sizes")
    parser.add_argument("--reps", type=int, default=1000, help="Replications per cell")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--grid", default="-1:1:0.25", help="Gamma grid lo:hi:step")
    parser.set_defaults(build_config=build_config)


def build_config(args: argparse.Namespace) -> RunConfig:
    search, solver = search_from_args(args)
    if args.dgp == "t":
        dgp = DgpSpec(kind=DgpKind.STUDENT_T, df=args.df if args.df is not None else DEFAULT_T_DF)
    else:
        dgp = DgpSpec(kind=DgpKind.NORMAL, df=args.df)
    grid = parse_grid(args.grid)
    designs = [
        SimulationConfig(
            dgp=dgp,
            n=n,
            gamma_grid=grid,
            replications=args.reps,
            seed=args.seed,
            ci_level=args.ci_level,
            search=search,
            solver=solver,
        )
        for n in args.n
    ]
    return RunConfig(
        command=Command.SIMULATE,
        simulation=designs,
        search=search,
        solver=solver,
        output_path=args.output,
        output_format=OutputFormat(args.format),
        ci_level=args.ci_level,
    )


def run_simulate(config: RunConfig) -> int:
    """Emit the metrics table and the multiplier/weight summaries"""
    rows = run_study(config.simulation)
    if config.output_format == OutputFormat.JSON:
        document = SimulationDocument(designs=config.simulation, rows=rows)
        emit(config.output_path, document.model_dump_json(indent=2) + "\n")
    else:
        emit_tables(config.output_path, [("metrics", metrics_frame(rows)), ("multipliers", multipliers_frame(rows))])
    return 0
