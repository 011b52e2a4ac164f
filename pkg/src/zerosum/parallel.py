"""Master/worker driver for the sequence extension search.

Work items are ``(seed, g1)`` pairs, one top-level candidate each, handed out
one at a time to whichever worker is idle.  Per-item run times differ by
orders of magnitude, so nothing is batched.
"""

from __future__ import annotations

import time
import traceback
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from functools import lru_cache
from typing import Iterable

from .group import FiniteAbelianGroup
from .search import Budget, ItemReport, Mode, SearchFrontier, SearchReport, _seed_frontier, sea_item, summarize
from .sequence import Sequence


@lru_cache(maxsize=8)
def _group(key: tuple) -> FiniteAbelianGroup:
    orders, policy, threshold = key
    return FiniteAbelianGroup(orders, policy, threshold)


def _group_key(group: FiniteAbelianGroup) -> tuple:
    return group.orders, group.table_policy, group.table_threshold


@lru_cache(maxsize=64)
def _frontier(key: tuple, counts: tuple[tuple[int, int], ...]) -> SearchFrontier:
    return _seed_frontier(Sequence(_group(key), dict(counts)))


def _work(key, counts, seed_index, g1, depth, mode, budget) -> ItemReport:
    group = _group(key)
    frontier = _frontier(key, counts)
    return sea_item(group, frontier, g1, depth, mode, budget, seed_index=seed_index)


def _failed(seed_index: int, g1: int, exc: BaseException) -> ItemReport:
    msg = "".join(traceback.format_exception_only(type(exc), exc)).strip()
    return ItemReport(seed_index, g1, False, [], 0, 0.0, error=msg)


def parallel_sea(
    seeds: Iterable[Sequence],
    depth: int,
    workers: int = 1,
    mode: Mode | str = Mode.FIRST_HIT,
    budget: Budget | None = None,
) -> SearchReport:
    """Run :func:`zerosum.search.sea` over many seeds on a pool of worker processes.

    The merged report is sorted by seed index, then ``g1``, so its content does
    not depend on ``workers``.  A work item that raises is recorded as failed
    (``ItemReport.error``) instead of aborting the run.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    mode = Mode(mode)
    seeds = list(seeds)
    start = time.monotonic()
    queue = []
    for i, seed in enumerate(seeds):
        counts = tuple(sorted(seed.counts().items()))
        key = _group_key(seed.group)
        frontier = _seed_frontier(seed)
        queue.extend((key, counts, i, int(g1), depth, mode, budget) for g1 in frontier.allowed)

    items: list[ItemReport] = []
    if workers == 1:
        for args in queue:
            try:
                items.append(_work(*args))
            except Exception as exc:
                items.append(_failed(args[2], args[3], exc))
    else:
        pending = iter(queue)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            running = {}

            def submit_next() -> bool:
                args = next(pending, None)
                if args is None:
                    return False
                running[pool.submit(_work, *args)] = args
                return True

            for _ in range(workers):
                if not submit_next():
                    break
            while running:
                done, _ = wait(running, return_when=FIRST_COMPLETED)
                for fut in done:
                    args = running.pop(fut)
                    try:
                        items.append(fut.result())
                    except Exception as exc:
                        items.append(_failed(args[2], args[3], exc))
                    submit_next()
    return summarize(items, len(seeds), time.monotonic() - start)
