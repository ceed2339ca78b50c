import argparse
import json
from pathlib import Path

from crpd.schemas import DOCUMENTS

from .common import emit


def register(subparsers) -> None:
    parser = subparsers.add_parser("schema", help="Print the JSON schema of a command's output document")
    parser.add_argument("document", choices=list(DOCUMENTS))
    parser.add_argument("--output", type=Path, help="Output file; stdout when omitted")
    parser.add_argument("--log-level", default=None)
    parser.set_defaults(build_config=None)


def run_schema(args: argparse.Namespace) -> int:
    schema = DOCUMENTS[args.document].model_json_schema()
    emit(args.output, json.dumps(schema, indent=2, sort_keys=True) + "\n")
    return 0
