from .main import build_parser, main
from .runner import run

__all__ = ['build_parser', 'main', 'run']
