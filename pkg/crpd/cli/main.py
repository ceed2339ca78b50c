import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from crpd.core.config import settings
from crpd.core.exceptions import ConfigError, CRPDError
from crpd.core.logging import configure_logging

from . import crossval, estimate, schema, simulate
from .common import ArgumentParser
from .runner import run

logger = logging.getLogger(__name__)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog=settings.PROJECT_NAME, description="Cressie-Read power divergence estimation")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    for module in (estimate, crossval, simulate, schema):
        module.register(subparsers)
    return parser


def _validation_detail(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item["loc"])
        parts.append(f"{location}: {item['msg']}" if location else item["msg"])
    return "; ".join(parts)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Command line entry point

    Returns:
        Exit status: 0 success, 1 usage error, 2 data error, 3 numerical failure
    """
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.log_level)
        if args.command == "schema":
            return schema.run_schema(args)
        return run(args.build_config(args))
    except ValidationError as e:
        failure: CRPDError = ConfigError(_validation_detail(e))
    except CRPDError as e:
        failure = e
    logger.debug("run failed", exc_info=True)
    print(f"error: {failure.one_line()}", file=sys.stderr)
    return failure.exit_code
