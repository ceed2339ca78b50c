import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from crpd.core.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: Optional[int] = None) -> List[R]:
    """
    Apply fn to every item, possibly in worker processes, returning results in input order

    Args:
        fn: Module-level (picklable) callable
        items: Work items
        workers: Process count; defaults to settings.resolve_workers()

    Returns:
        List of results aligned with items
    """
    items = list(items)
    workers = workers if workers and workers > 0 else settings.resolve_workers()
    workers = min(workers, len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    chunksize = max(1, len(items) // (4 * workers))
    logger.debug("Dispatching %d items to %d worker processes", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
