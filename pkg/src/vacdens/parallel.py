"""Order-preserving parallel map over independent samples.

Each sample is computed by the same code path whatever the worker count, so
results are bit-identical for ``workers=1`` and ``workers>1``.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: int | None) -> int:
    if workers is None or workers == 0:
        return os.cpu_count() or 1
    if workers < 0:
        raise ValueError("workers must be >= 0")
    return workers


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: int | None = 1) -> list[R]:
    """``[fn(x) for x in items]``, optionally spread over worker processes.

    ``fn`` must be picklable (module-level function or ``functools.partial``).
    """
    seq: Sequence[T] = list(items)
    n = resolve_workers(workers)
    if n == 1 or len(seq) < 2:
        return [fn(x) for x in seq]
    chunk = max(1, len(seq) // (4 * n))
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, seq, chunksize=chunk))
