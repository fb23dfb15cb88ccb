"""
Keyed fan-out of independent runs over a process pool.

Results come back as a dict ordered by key, so aggregation never depends
on completion order. With one worker everything runs in-process.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, Hashable, Mapping, Optional, Tuple, TypeVar

from config import get_parallel_config

logger = logging.getLogger(__name__)

K = TypeVar("K", bound=Hashable)
R = TypeVar("R")


def resolve_workers(max_workers: Optional[int]) -> int:
    if max_workers is None:
        return get_parallel_config().max_workers
    if max_workers < 1:
        raise ValueError(f"max_workers must be at least 1, got {max_workers}")
    return max_workers


def run_keyed(fn: Callable[..., R], tasks: Mapping[K, Tuple], max_workers: Optional[int] = None) -> Dict[K, R]:
    """Call ``fn(*args)`` for every ``key: args`` entry; ``fn`` must be picklable."""
    workers = resolve_workers(max_workers)
    keys = sorted(tasks)
    if workers == 1 or len(keys) <= 1:
        return {key: fn(*tasks[key]) for key in keys}

    logger.debug("Dispatching %d runs to %d worker processes", len(keys), workers)
    chunk = get_parallel_config().chunk_size
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = pool.map(_apply, [fn] * len(keys), [tasks[key] for key in keys], chunksize=chunk)
        return dict(zip(keys, results))


def _apply(fn: Callable[..., R], args: Tuple) -> R:
    return fn(*args)
