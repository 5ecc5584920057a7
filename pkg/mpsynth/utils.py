from __future__ import annotations

import itertools
import time
from typing import Iterable, Iterator, List, Optional, Sequence

from .exceptions import DeadlineExceeded


def bits(mask: int) -> List[int]:
    """Return the indices of the set bits of ``mask`` in ascending order."""
    result: List[int] = []
    i = 0
    while mask:
        if mask & 1:
            result.append(i)
        mask >>= 1
        i += 1
    return result


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def is_subset(small: int, big: int) -> bool:
    return small & ~big == 0


def submasks(mask: int) -> Iterator[int]:
    """Yield every submask of ``mask``, ``mask`` itself first and ``0`` last."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def masks_by_size(labels: Sequence[str]) -> Iterator[int]:
    """Yield the non-empty subsets of the goals named by ``labels`` by ascending size.

    Subsets of equal size come in lexicographic order of their sorted labels.
    """
    n = len(labels)
    for size in range(1, n + 1):
        level = [mask_of(combo) for combo in itertools.combinations(range(n), size)]
        level.sort(key=lambda m: label_list(m, labels))
        yield from level


def label_list(mask: int, labels: Sequence[str]) -> List[str]:
    """Return the sorted labels of the goals selected by ``mask``."""
    return sorted(labels[i] for i in bits(mask))


def antichain(masks: Iterable[int]) -> List[int]:
    """Return the subset-maximal elements of ``masks`` (duplicates removed)."""
    unique = sorted(set(masks), key=popcount, reverse=True)
    kept: List[int] = []
    for m in unique:
        if not any(is_subset(m, k) for k in kept):
            kept.append(m)
    return kept


class Deadline:
    """Wall-clock budget measured with :func:`time.monotonic`.

    :param seconds: budget, or ``None`` for no budget
    """

    def __init__(self, seconds: Optional[float] = None):
        self.seconds = seconds
        self.started = time.monotonic()

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    @property
    def expired(self) -> bool:
        if self.seconds is None:
            return False
        return time.monotonic() - self.started > self.seconds

    def check(self, detail: str = "") -> None:
        if self.expired:
            assert self.seconds is not None
            raise DeadlineExceeded(self.seconds, detail)


class Stopwatch:
    """Context manager recording elapsed milliseconds."""

    def __init__(self) -> None:
        self.ms = 0.0
        self._start = 0.0

    def __enter__(self) -> Stopwatch:
        self._start = time.perf_counter()
        return self

    def __exit__(self, *exc: object) -> None:
        self.ms = (time.perf_counter() - self._start) * 1000
