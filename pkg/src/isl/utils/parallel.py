# src/isl/utils/parallel.py
"""
Thread-count resolution, seed splitting and an order-preserving map.

Seed splitting rule: task i of a run seeded with `seed` uses the i-th child
of numpy.random.SeedSequence(seed). The child depends only on (seed, i), so
results do not depend on how tasks are distributed over threads.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

import numpy as np
from tqdm import tqdm

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(flag: Optional[int] = None) -> int:
    if flag is not None:
        return max(1, int(flag))
    env = os.getenv("ISL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            return 1
    return 1


def spawn_seeds(seed: int, count: int) -> List[int]:
    """Integer seeds of the first `count` children of SeedSequence(seed)."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def parallel_map(
    fn: Callable[[T], R],
    items: Sequence[T] | Iterable[T],
    *,
    threads: int = 1,
    desc: Optional[str] = None,
    progress: bool = False,
) -> List[R]:
    """Apply fn to every item; output order equals input order for any thread count."""
    seq = list(items)
    if threads <= 1 or len(seq) <= 1:
        return [fn(x) for x in tqdm(seq, desc=desc, disable=not progress)]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, x) for x in seq]
        return [f.result() for f in tqdm(futures, desc=desc, disable=not progress)]
