"""Deterministic block-parallel execution.

Work is always split into a block decomposition that depends only on the
problem size (never on the worker count); blocks are evaluated serially or
on a process pool and merged in block order, so results are identical for
any number of workers.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

A = TypeVar("A")
R = TypeVar("R")

BLOCK_SIZE = 8192


def index_blocks(total: int, block_size: int = BLOCK_SIZE) -> list[tuple[int, int]]:
    """Half-open [lo, hi) ranges covering [0, total), fixed-size blocks."""
    return [(lo, min(lo + block_size, total)) for lo in range(0, total, block_size)]


def run_blocks(fn: Callable[[A], R], blocks: Sequence[A], workers: int = 1) -> list[R]:
    if workers <= 1 or len(blocks) <= 1:
        return [fn(b) for b in blocks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, blocks))
