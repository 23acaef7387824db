"""Order-preserving map over a thread pool sized by ``REESFILT_THREADS``."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV = "REESFILT_THREADS"


def threads() -> int:
    try:
        n = int(os.environ.get(ENV, "1"))
    except ValueError:
        n = 1
    return max(1, n)


def pmap(fn, items):
    items = list(items)
    n = threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
