from crpd.models.run_config import Command, RunConfig

from .crossval import run_crossval
from .estimate import run_estimate
from .simulate import run_simulate

HANDLERS = {
    Command.ESTIMATE: run_estimate,
    Command.CROSSVAL: run_crossval,
    Command.SIMULATE: run_simulate,
}


def run(config: RunConfig) -> int:
    """Execute one validated run configuration and return its exit status"""
    return HANDLERS[config.command](config)
