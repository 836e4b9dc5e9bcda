import operator
from collections import Counter
from functools import reduce
from multiprocessing import Pool
from typing import Callable, Dict, Iterable, List, Sequence, Tuple, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def merge_histograms(parts: Iterable[Dict[int, int]]) -> Dict[int, int]:
    """Return the key-wise sum of all histograms, with zero counts dropped
    and keys sorted. """
    total: Counter = reduce(operator.add, map(Counter, parts), Counter())
    return {key: total[key] for key in sorted(total) if total[key]}


def partition_range(start: int, stop: int,
                    parts: int) -> List[Tuple[int, int]]:
    """Split `range(start, stop)` into at most `parts` contiguous, non-empty
    half-open ranges of nearly equal length. """
    length = stop - start
    if length <= 0:
        return []
    parts = max(1, min(parts, length))
    size, extra = divmod(length, parts)
    ranges: List[Tuple[int, int]] = []
    lo = start
    for i in range(parts):
        hi = lo + size + (1 if i < extra else 0)
        ranges.append((lo, hi))
        lo = hi
    return ranges


def map_blocks(func: Callable[[T], R], tasks: Sequence[T],
               threads: int = 1) -> List[R]:
    """Apply `func` to every task, in a process pool when `threads > 1`.

    Results come back in task order, so any merge over them is independent of
    the number of workers. `func` must be a module-level function.
    """
    if threads <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    with Pool(min(threads, len(tasks))) as pool:
        return pool.map(func, tasks)


__all__ = ['merge_histograms', 'partition_range', 'map_blocks']
