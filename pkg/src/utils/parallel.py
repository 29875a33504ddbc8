from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from src.config import get_settings
from src.utils.logger import get_logger

logger = get_logger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def ordered_map(func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """
    Map func over items, returning results in input order

    Args:
        func: Pure function applied to each item
        items: Work items
        threads: Worker count; defaults to settings.threads. 1 runs inline.

    Returns:
        Results in the same order as items, independent of scheduling
    """
    items = list(items)
    workers = threads or get_settings().threads
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug(f"Dispatching {len(items)} jobs over {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
