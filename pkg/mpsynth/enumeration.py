"""Subset-by-subset baseline with monotone pruning.

Goal sets are checked by ascending size, each as one reachability game on
the product of its automata with joint acceptance. Any superset of a set
found unrealizable is skipped.
"""
from __future__ import annotations

import concurrent.futures
import dataclasses
import logging
import threading
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from typing_extensions import Literal

from .alphabet import Alphabet
from .arena import build_product
from .config import Limits
from .dfa import Dfa
from .exceptions import ResourceError
from .explicit import solve_single
from .spec import format_goal_set
from .symbolic import encode, solve_single_symbolic
from .types import EnumRow, IterationStats, Verdict
from .utils import Deadline, Stopwatch, antichain, bits, is_subset, label_list, masks_by_size, popcount

LOG = logging.getLogger(__name__)

Mode = Literal["explicit", "symbolic"]


@dataclasses.dataclass
class EnumReport:
    """Outcome of the baseline at the initial state.

    :param labels: goal labels
    :param maximal: subset-maximal realizable goal sets found
    :param rows: one row per subset, in visiting order
    """

    labels: List[str]
    maximal: List[int] = dataclasses.field(default_factory=list)
    rows: List[EnumRow] = dataclasses.field(default_factory=list)
    checked: int = 0
    pruned: int = 0
    realizable: int = 0
    unknown: int = 0

    @property
    def complete(self) -> bool:
        return self.unknown == 0

    @property
    def maximal_labels(self) -> List[List[str]]:
        return [label_list(m, self.labels) for m in self.maximal]


def _solve_subset(
    dfas: Sequence[Dfa],
    alphabet: Alphabet,
    mode: Mode,
    limits: Limits,
    timeout: Optional[float],
) -> bool:
    deadline = Deadline(timeout)
    if mode == "explicit":
        arena = build_product(dfas, alphabet, limits)
        deadline.check("product construction")
        return solve_single(arena, deadline=deadline).realizable
    a = encode(dfas, alphabet, limits=limits)

    def tick(_: IterationStats) -> None:
        deadline.check("symbolic iteration")

    wf = solve_single_symbolic(a, on_iteration=tick)
    point = a.state_encoding(a.initial)
    point.update(a.goal_encoding(0))
    return a.engine.evaluate_fn(wf.w, point)


class _Frontier:
    """Unrealizable goal sets found so far, shared between workers."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._sets: List[int] = []

    def add(self, c: int) -> None:
        with self._lock:
            self._sets.append(c)

    def pruning(self, c: int) -> Optional[int]:
        with self._lock:
            for u in self._sets:
                if is_subset(u, c):
                    return u
        return None


def _levels(labels: Sequence[str]) -> Iterator[List[int]]:
    level: List[int] = []
    size = 1
    for c in masks_by_size(labels):
        if popcount(c) != size:
            yield level
            level, size = [], size + 1
        level.append(c)
    if level:
        yield level


def enumerate_maximal(
    dfas: Sequence[Dfa],
    alphabet: Alphabet,
    mode: Mode = "symbolic",
    labels: Optional[Sequence[str]] = None,
    limits: Optional[Limits] = None,
    workers: int = 1,
    timeout: Optional[float] = None,
) -> EnumReport:
    """Find the maximal realizable goal sets by pruned enumeration.

    Subsets of equal size cannot prune one another, so each size level is
    checked as one batch, in parallel when ``workers`` is above one.

    :param dfas: one automaton per goal
    :param alphabet: the partitioned atoms
    :param mode: single-property solver used per subset
    :param labels: goal labels, ``g1..gn`` by default
    :param limits: resource ceilings, defaults to :meth:`Limits.from_env`
    :param workers: threads checking one size level
    :param timeout: seconds allowed per subset; ``None`` for no limit
    :return: the report; subsets that hit a limit are ``unknown`` and make
        the report incomplete
    :raises ResourceError: if there are more goals than the enumeration limit
    """
    limits = limits or Limits.from_env()
    n = len(dfas)
    if n > limits.max_enum_goals:
        raise ResourceError("enumeration goals", limits.max_enum_goals)
    names = list(labels or [f"g{i + 1}" for i in range(n)])
    report = EnumReport(names)
    frontier = _Frontier()
    realizable: List[int] = []

    def check(c: int) -> Tuple[Verdict, float]:
        chosen = [dfas[i] for i in bits(c)]
        ok: Optional[bool] = None
        with Stopwatch() as watch:
            try:
                ok = _solve_subset(chosen, alphabet, mode, limits, timeout)
            except ResourceError as e:
                LOG.warning("%s: %s", format_goal_set(label_list(c, names)), e)
        if ok is None:
            return "unknown", watch.ms
        verdict: Verdict = "realizable" if ok else "unrealizable"
        return verdict, watch.ms

    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for level in _levels(names):
            pending: Dict[int, "concurrent.futures.Future[Tuple[Verdict, float]]"] = {}
            pruned_by: Dict[int, int] = {}
            for c in level:
                u = frontier.pruning(c)
                if u is None:
                    pending[c] = pool.submit(check, c)
                else:
                    pruned_by[c] = u
            for c in level:
                label_set = format_goal_set(label_list(c, names))
                if c in pruned_by:
                    report.pruned += 1
                    by = format_goal_set(label_list(pruned_by[c], names))
                    report.rows.append(
                        {"label_set": label_set, "verdict": "pruned", "time_ms": 0.0, "pruned_by": by}
                    )
                    continue
                verdict, ms = pending[c].result()
                report.checked += 1
                if verdict == "realizable":
                    report.realizable += 1
                    realizable.append(c)
                elif verdict == "unrealizable":
                    frontier.add(c)
                else:
                    report.unknown += 1
                report.rows.append(
                    {"label_set": label_set, "verdict": verdict, "time_ms": ms, "pruned_by": ""}
                )
            LOG.debug("enumerated %s subsets of one size", len(level))

    report.maximal = sorted(antichain(realizable), key=lambda m: label_list(m, names))
    if not report.maximal:
        # the empty set is realizable everywhere
        report.maximal = [0]
    if not report.complete:
        LOG.warning("enumeration incomplete: %s subsets unknown", report.unknown)
    return report
