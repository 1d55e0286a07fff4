"""Worker-thread plumbing.

The worker count comes from the PULSEBOOST_WORKERS environment variable
(default: all cores). Work is always partitioned deterministically and
reduced in input order, so results are bit-identical for any count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

WORKERS_ENV = "PULSEBOOST_WORKERS"

T = TypeVar("T")
R = TypeVar("R")


def get_worker_count(requested: int | None = None) -> int:
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def map_ordered(
    fn: Callable[[T], R], items: Sequence[T], pool: ThreadPoolExecutor | None
) -> list[R]:
    """Apply ``fn`` to every item, results in input order."""
    if pool is None or len(items) <= 1:
        return [fn(it) for it in items]
    return list(pool.map(fn, items))


def column_blocks(n_columns: int, n_blocks: int) -> list[tuple[int, int]]:
    """Contiguous half-open column ranges, at most n_blocks of them."""
    n_blocks = max(1, min(n_blocks, n_columns))
    size, extra = divmod(n_columns, n_blocks)
    out, start = [], 0
    for b in range(n_blocks):
        width = size + (1 if b < extra else 0)
        out.append((start, start + width))
        start += width
    return out
