from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar
import logging
import os
import warnings

logger = logging.getLogger(__name__)

THREADS_ENV = "GRADEALG_THREADS"
LOG_STEPS_ENV = "GRADEALG_LOG_STEPS"
_OFF_WORDS = frozenset({"", "0", "false", "no", "off"})

T = TypeVar("T")
R = TypeVar("R")


def is_truthy_env(var_name: str) -> bool:
    """An unset variable is off, and so are ``0``, ``false``, ``no`` and ``off`` in any case."""
    return os.environ.get(var_name, "").strip().lower() not in _OFF_WORDS


def worker_count() -> int:
    """
    Number of workers for parallel searches, read from GRADEALG_THREADS.
    Missing or invalid values mean a single worker.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or not raw.strip():
        return 1
    try:
        value = int(raw.strip())
    except ValueError:
        warnings.warn(f"{THREADS_ENV}={raw!r} is not an integer, using 1 worker", RuntimeWarning, stacklevel=2)
        return 1
    if value < 1:
        warnings.warn(f"{THREADS_ENV}={raw!r} is not positive, using 1 worker", RuntimeWarning, stacklevel=2)
        return 1
    return value


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Apply ``fn`` to every item; the result order is the input order whatever the worker count."""
    work = list(items)
    workers = min(worker_count(), max(len(work), 1))
    if workers <= 1:
        return [fn(item) for item in work]
    logger.debug("dispatching %d tasks to %d workers", len(work), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, work))
