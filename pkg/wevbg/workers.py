"""
Worker pool for per-block and per-frame work.

Blocks and frames are independent, so training and segmentation fan out
over a thread pool (numpy releases the GIL inside its kernels). Results come
back in submission order, which keeps every merge deterministic.

The pool size defaults to the number of processors and is capped by the
``WEVBG_THREADS`` environment variable.

Example:
    >>> from wevbg.workers import WorkerPool
    >>> with WorkerPool(size=2) as pool:
    ...     pool.map(lambda x: x * x, [1, 2, 3])
    [1, 4, 9]
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ConfigError

ENV_THREADS = 'WEVBG_THREADS'

logger = logging.getLogger(__name__)


def default_size():
    """
    Number of workers allowed for this process.

    Returns:
        ``os.cpu_count()`` capped by ``WEVBG_THREADS`` when it is set
    """
    size = os.cpu_count() or 1
    cap = os.environ.get(ENV_THREADS)
    if cap:
        try:
            cap = int(cap)
        except ValueError:
            raise ConfigError(f"{ENV_THREADS} must be a positive integer, got {cap!r}")
        if cap < 1:
            raise ConfigError(f"{ENV_THREADS} must be a positive integer, got {cap}")
        size = min(size, cap)
    return size


class WorkerPool:
    """
    Ordered map over a thread pool.

    With a size of 1 the work runs inline on the calling thread.
    """
    def __init__(self, size=None):
        """
        Initialize a new pool.

        Args:
            size: Number of worker threads (default: ``default_size()``)
        """
        self.size = default_size() if size is None else max(1, int(size))
        self.executor = None

    def init(self):
        """Start the worker threads if the pool is parallel."""
        if self.executor is None and self.size > 1:
            self.executor = ThreadPoolExecutor(max_workers=self.size)
            logger.debug('worker pool started with %d threads', self.size)
        return self

    def map(self, function, items):
        """
        Apply ``function`` to every item.

        Args:
            function: Callable of one argument
            items: Iterable of inputs

        Returns:
            List of results in the order of ``items``
        """
        items = list(items)
        if self.size == 1 or len(items) < 2:
            return [function(item) for item in items]
        self.init()
        return list(self.executor.map(function, items))

    def close(self):
        """Shut the worker threads down."""
        if self.executor is not None:
            self.executor.shutdown(wait=True)
            self.executor = None

    def __enter__(self):
        return self.init()

    def __exit__(self, exc_type, exc, tb):
        self.close()
        return False


def pool_map(pool, function, items):
    """Map through ``pool`` if given, else inline."""
    if pool is None:
        return [function(item) for item in items]
    return pool.map(function, items)
