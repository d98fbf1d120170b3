import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "DEFEKTUM_THREADS"


def resolve_threads(threads=None):
    """Number of worker threads: explicit request, capped by ``DEFEKTUM_THREADS``."""
    n = threads if threads is not None else (os.cpu_count() or 1)
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            n = min(n, int(cap))
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {cap!r}") from None
    return max(1, int(n))


def ordered_map(func, items, threads=None):
    """``list(map(func, items))`` on a thread pool; results keep input order."""
    items = list(items)
    n = resolve_threads(threads)
    if n == 1 or len(items) < 2:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))
