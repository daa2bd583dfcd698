"""Deterministic thread-pool map.

The compiled kernels release the GIL, so threads give real parallelism.
Results always come back in input order.
"""

import os
from concurrent.futures import ThreadPoolExecutor

ENV_WORKERS = "HODGE_SPECTRA_WORKERS"


def worker_count(workers=None) -> int:
    env = os.environ.get(ENV_WORKERS)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    if workers is None:
        return os.cpu_count() or 1
    return max(1, int(workers))


def pmap(fn, items, workers=None):
    items = list(items)
    n = min(worker_count(workers), len(items))
    if n <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * n))))
