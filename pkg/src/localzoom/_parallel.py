"""Chunked work splitting; results never depend on the worker count."""

import os
from concurrent.futures import ProcessPoolExecutor


def resolve_threads(threads=None):
    env = os.environ.get("ZOOM_THREADS")
    if env:
        return max(1, int(env))
    return max(1, int(threads or 1))


def split_range(lo, hi, parts):
    """Split [lo, hi] into at most `parts` contiguous closed ranges."""
    if hi < lo:
        return []
    n = hi - lo + 1
    parts = max(1, min(parts, n))
    size = -(-n // parts)
    return [(s, min(hi, s + size - 1)) for s in range(lo, hi + 1, size)]


def _call(job):
    fn, args = job
    return fn(*args)


def run_chunks(fn, arglist, threads=1):
    """Apply fn to each argument tuple, in order."""
    threads = resolve_threads(threads)
    if threads <= 1 or len(arglist) <= 1:
        return [fn(*a) for a in arglist]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(_call, [(fn, a) for a in arglist]))
