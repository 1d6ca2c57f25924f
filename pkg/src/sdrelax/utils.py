"""Small shared helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_budget() -> int:
    """Parallelism cap from ``SD_RELAX_THREADS`` (default 1)."""
    raw = os.environ.get("SD_RELAX_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn, items):
    """Map preserving input order; threads only when the budget allows.

    Results are independent of scheduling because each call is pure.
    """
    items = list(items)
    budget = thread_budget()
    if budget <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=budget) as pool:
        return list(pool.map(fn, items))
