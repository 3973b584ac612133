"""Worker-count control.

``CUETRUNC_THREADS`` caps the number of worker threads used for
embarrassingly parallel loops (grid evaluation, per-sample work).  Results
are merged by index, so the worker count never affects any output value.
"""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    raw = os.environ.get("CUETRUNC_THREADS", "")
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"CUETRUNC_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError("CUETRUNC_THREADS must be >= 1")
    return min(value, 64)


def indexed_map(fn, items):
    """Apply ``fn`` to every item, preserving input order in the output.

    Runs on a thread pool when CUETRUNC_THREADS > 1.  ``fn`` must be free of
    shared mutable state; outputs depend only on the item, so the result is
    identical for any worker count.
    """
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
