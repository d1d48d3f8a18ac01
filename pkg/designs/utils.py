import logging
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from django.conf import settings

logger = logging.getLogger(__name__)


def oofa_setting(name, default=None):
    return getattr(settings, 'OOFA', {}).get(name, default)


def default_seed():
    return oofa_setting('DEFAULT_SEED', 20240501)


def default_threads():
    threads = oofa_setting('THREADS')
    if threads is None:
        threads = int(os.environ.get('OOFA_THREADS', '1'))
    return max(1, int(threads))


def substream(seed, index):
    """Independent generator for restart/rep `index`, derived as seed XOR index."""
    return np.random.Generator(np.random.PCG64((int(seed) ^ int(index)) & 0xFFFFFFFFFFFFFFFF))


def run_parallel(fn, items, threads=1):
    """Map `fn` over `items` keeping input order; threads=1 runs inline."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    workers = min(threads, len(items), os.cpu_count() or 1)
    logger.debug("dispatching %d tasks to %d workers", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))
