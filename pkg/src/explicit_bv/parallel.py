"""Order-preserving parallel map.

Results always come back in input order, so any reduction the caller does
afterwards is bit-identical regardless of the thread count.
"""

import os
from concurrent.futures import ThreadPoolExecutor

DEFAULT_THREADS = int(os.environ.get("EXPLICIT_BV_THREADS", "1"))


def parallel_map(fn, items, threads=None):
    items = list(items)
    threads = DEFAULT_THREADS if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
