"""
Worker-pool plumbing shared by the enumeration, trial and solver fan-outs.

The pool size is capped once per process (the CLI's ``--threads``); FFTs
use the same cap through ``scipy.fft``'s ``workers`` argument.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar
import logging

from ..config import DEFAULT_THREADS
from ..errors import ParameterError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_thread_cap = DEFAULT_THREADS


def configure_threads(threads: int) -> None:
    """Cap every worker pool and FFT in this process"""
    global _thread_cap
    if threads < 1:
        raise ParameterError("threads must be >= 1")
    _thread_cap = threads
    logger.debug(f"Worker cap set to {threads}")


def worker_count() -> int:
    return _thread_cap


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """
    Apply ``fn`` to every item, preserving input order.

    Runs inline when the cap is 1.
    """
    items = list(items)
    if _thread_cap == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(_thread_cap, len(items))) as pool:
        return list(pool.map(fn, items))
