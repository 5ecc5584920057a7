"""Explicit-state fixed points over product arenas.

These solvers are the correctness reference for the symbolic engine. Goal
sets are bitmasks over the arena's goals; a pair ``(s, C)`` reads "goal set
``C`` is realizable from state ``s``".
"""
from __future__ import annotations

import collections
import dataclasses
import logging
from typing import AbstractSet, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from .arena import ProductArena
from .config import Limits
from .exceptions import InvariantError, ResourceError, UnrealizableError
from .transducer import Transducer, TransducerState
from .types import GoalSetDoc, RelationDoc, RelationStateDoc
from .utils import Deadline, antichain, is_subset, label_list, submasks

LOG = logging.getLogger(__name__)

Pair = Tuple[int, int]
PairSet = FrozenSet[Pair]
#: per-state antichain of goal sets
MaxRelation = Dict[int, Tuple[int, ...]]


class WinRelation:
    """Realizable ``(state, goal set)`` pairs with the iteration that first
    contained each pair."""

    def __init__(self, ranks: List[Dict[int, int]]):
        self.ranks = ranks

    def __contains__(self, pair: object) -> bool:
        s, c = pair  # type: ignore[misc]
        return c in self.ranks[s]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WinRelation):
            return NotImplemented
        return self.ranks == other.ranks

    def rank(self, s: int, c: int) -> Optional[int]:
        return self.ranks[s].get(c)

    def sets(self, s: int) -> List[int]:
        return sorted(self.ranks[s])

    def pairs(self) -> PairSet:
        return frozenset((s, c) for s, row in enumerate(self.ranks) for c in row)

    @property
    def iterations(self) -> int:
        return max((r for row in self.ranks for r in row.values()), default=0)


@dataclasses.dataclass(frozen=True)
class SingleSolution:
    """Winning region of a single reachability game.

    ``rank[s]`` is the number of rounds needed from ``s``; ``move[s]`` the
    chosen output for states of positive rank.
    """

    rank: Dict[int, int]
    move: Dict[int, int]
    initial: int = 0

    @property
    def realizable(self) -> bool:
        return self.initial in self.rank


def _by_state(rel: Iterable[Pair]) -> Dict[int, Set[int]]:
    table: Dict[int, Set[int]] = collections.defaultdict(set)
    for s, c in rel:
        table[s].add(c)
    return table


def _check_goal_count(a: ProductArena, limits: Optional[Limits]) -> None:
    limits = limits or Limits.from_env()
    if a.n_goals > limits.max_explicit_goals:
        raise ResourceError("explicit solver goals", limits.max_explicit_goals)


def pre_c(a: ProductArena, target: AbstractSet[int]) -> Set[int]:
    """States from which some output forces every input into ``target``."""
    ys = range(1 << a.alphabet.n_outputs)
    return {
        s
        for s in range(a.n_states)
        if any(all(t in target for t in a.successors(s, y)) for y in ys)
    }


def _least_output(
    a: ProductArena, s: int, good: Callable[[int], bool]
) -> Optional[int]:
    for y in a.alphabet.outputs_in_order():
        if all(good(t) for t in a.successors(s, y)):
            return y
    return None


def solve_single(
    a: ProductArena,
    target: Optional[AbstractSet[int]] = None,
    deadline: Optional[Deadline] = None,
) -> SingleSolution:
    """Solve the reachability game towards ``target``.

    :param a: the game arena
    :param target: states to reach; defaults to the states satisfying every goal
    :param deadline: checked once per round
    :return: ranks of the winning states and a rank-decreasing move for each
        state of positive rank, the lexicographically least such output
    :raises DeadlineExceeded: if ``deadline`` runs out
    """
    if target is None:
        target = {s for s in range(a.n_states) if a.sat[s] == a.full_mask}
    rank = {s: 0 for s in target}
    move: Dict[int, int] = {}
    i = 0
    while True:
        i += 1
        if deadline is not None:
            deadline.check("explicit iteration")
        added: Dict[int, int] = {}
        for s in range(a.n_states):
            if s in rank:
                continue
            y = _least_output(a, s, rank.__contains__)
            if y is not None:
                added[s] = y
        if not added:
            break
        for s, y in added.items():
            rank[s] = i
            move[s] = y
    return SingleSolution(rank, move, a.initial)


def pre_mc(a: ProductArena, rel: Iterable[Pair]) -> PairSet:
    """Controllable multi-property predecessor of a pair set.

    :return: ``{(s, C) : some output forces (succ, C) into rel for all inputs}``
    """
    table = _by_state(rel)
    out: Set[Pair] = set()
    for s in range(a.n_states):
        for y in range(1 << a.alphabet.n_outputs):
            common: Optional[Set[int]] = None
            for t in a.successors(s, y):
                here = table.get(t, set())
                common = set(here) if common is None else common & here
                if not common:
                    break
            if common:
                out.update((s, c) for c in common)
    return frozenset(out)


def initial_relation(a: ProductArena) -> PairSet:
    return frozenset((s, c) for s in range(a.n_states) for c in submasks(a.sat[s]))


def _iteration_bound(a: ProductArena) -> int:
    return a.n_states * (1 << a.n_goals)


def win_m(a: ProductArena, limits: Optional[Limits] = None) -> WinRelation:
    """Least fixed point of the multi-property controllable predecessor.

    Pairs are processed layer by layer: a pair joins layer ``i + 1`` as soon
    as, for some output, every input leads into layers up to ``i``. Ranks
    are therefore exact.

    :raises ResourceError: if the arena has more goals than the explicit limit
    :raises InvariantError: if the iteration bound is exceeded
    """
    _check_goal_count(a, limits)
    nx = a.alphabet.n_inputs
    n_inputs = 1 << nx
    # pred[t] = [(s, y, number of inputs moving s to t under y)]
    pred: List[List[Tuple[int, int, int]]] = [[] for _ in range(a.n_states)]
    for s in range(a.n_states):
        counts: Dict[Tuple[int, int], int] = collections.Counter()
        for sym, t in enumerate(a.delta[s]):
            counts[(sym >> nx, t)] += 1
        for (y, t), k in counts.items():
            pred[t].append((s, y, k))

    ranks: List[Dict[int, int]] = [{} for _ in range(a.n_states)]
    layer: List[Pair] = []
    for s in range(a.n_states):
        for c in submasks(a.sat[s]):
            ranks[s][c] = 0
            layer.append((s, c))
    missing: Dict[Tuple[int, int, int], int] = {}
    i = 0
    bound = _iteration_bound(a)
    while layer:
        nxt: List[Pair] = []
        for t, c in layer:
            for s, y, k in pred[t]:
                if c in ranks[s]:
                    continue
                key = (s, y, c)
                left = missing.get(key, n_inputs) - k
                missing[key] = left
                if left == 0:
                    ranks[s][c] = i + 1
                    nxt.append((s, c))
        if nxt:
            i += 1
            if i > bound:
                raise InvariantError(f"fixed point exceeded {bound} iterations")
            LOG.debug("win_m layer %s: %s new pairs", i, len(nxt))
        layer = nxt
    return WinRelation(ranks)


def win_m_batched(a: ProductArena) -> WinRelation:
    """Naive batched iteration of the same fixed point as :func:`win_m`."""
    current = initial_relation(a)
    ranks: List[Dict[int, int]] = [{} for _ in range(a.n_states)]
    for s, c in current:
        ranks[s][c] = 0
    i = 0
    while True:
        grown = current | pre_mc(a, current)
        if grown == current:
            return WinRelation(ranks)
        i += 1
        for s, c in grown - current:
            ranks[s][c] = i
        current = grown


def max_op(rel: Iterable[Pair]) -> MaxRelation:
    """Keep, per state, only the subset-maximal goal sets."""
    return {s: tuple(sorted(antichain(cs))) for s, cs in sorted(_by_state(rel).items())}


def downward_close(m: Mapping[int, Iterable[int]]) -> PairSet:
    """All pairs ``(s, D)`` with ``D`` contained in a set stored at ``s``."""
    return frozenset((s, d) for s, cs in m.items() for c in cs for d in submasks(c))


def _meet(left: Iterable[int], right: Iterable[int]) -> List[int]:
    return antichain(a & b for a in left for b in right)


def _pre_mmc_antichains(a: ProductArena, m: Mapping[int, Iterable[int]]) -> MaxRelation:
    out: MaxRelation = {}
    for s in range(a.n_states):
        found: List[int] = []
        for y in range(1 << a.alphabet.n_outputs):
            common: Optional[List[int]] = None
            for t in set(a.successors(s, y)):
                here = list(m.get(t, ()))
                common = here if common is None else _meet(common, here)
                if not common:
                    break
            if common:
                found.extend(common)
        if found:
            out[s] = tuple(sorted(antichain(found)))
    return out


def pre_mmc(a: ProductArena, m: Mapping[int, Iterable[int]]) -> PairSet:
    """Maximal multi-property predecessor.

    :return: ``{(s, C) : some output forces, for all inputs, a successor
        storing a superset of C}``
    """
    return downward_close(_pre_mmc_antichains(a, m))


def win_mm(a: ProductArena, limits: Optional[Limits] = None) -> MaxRelation:
    """Fixed point of ``Max(W ∪ PreMMC(W))`` from the satisfied goal sets.

    :raises ResourceError: if the arena has more goals than the explicit limit
    :raises InvariantError: if the iteration bound is exceeded
    """
    _check_goal_count(a, limits)
    current: MaxRelation = {s: (a.sat[s],) for s in range(a.n_states)}
    bound = _iteration_bound(a)
    i = 0
    while True:
        step = _pre_mmc_antichains(a, current)
        grown: MaxRelation = {
            s: tuple(sorted(antichain(list(current[s]) + list(step.get(s, ())))))
            for s in range(a.n_states)
        }
        if grown == current:
            LOG.debug("win_mm stable after %s iterations", i)
            return current
        i += 1
        if i > bound:
            raise InvariantError(f"fixed point exceeded {bound} iterations")
        current = grown


def extract_strategy(a: ProductArena, w: WinRelation, c: int) -> Transducer:
    """Build a transducer realizing goal set ``c`` from the initial state.

    Each reached state of positive rank outputs the lexicographically least
    valuation forcing every successor to a smaller rank; states already
    satisfying ``c`` are done.

    :raises UnrealizableError: if ``(initial, c)`` is not in ``w``
    """
    if w.rank(a.initial, c) is None:
        raise UnrealizableError(label_list(c, a.labels))
    ids: Dict[int, int] = {a.initial: 0}
    order = [a.initial]
    built: List[TransducerState] = []
    k = 0
    while k < len(order):
        s = order[k]
        k += 1
        r = w.rank(s, c)
        assert r is not None
        if r == 0:
            built.append(TransducerState(None, (), s))
            continue

        def closer(t: int, bound: int = r) -> bool:
            rt = w.rank(t, c)
            return rt is not None and rt < bound

        y = _least_output(a, s, closer)
        if y is None:
            raise InvariantError(f"no rank-decreasing output at state {s}")
        nxt: List[int] = []
        for t in a.successors(s, y):
            if t not in ids:
                ids[t] = len(order)
                order.append(t)
            nxt.append(ids[t])
        built.append(TransducerState(y, tuple(nxt), s))
    return Transducer(a.alphabet, built)


def oracle_realizable(
    a: ProductArena, c: int, horizon: int, start: Optional[int] = None
) -> bool:
    """Decide by exhaustive minimax whether ``c`` can be forced within
    ``horizon`` rounds."""
    memo: Dict[Tuple[int, int], bool] = {}
    ys = range(1 << a.alphabet.n_outputs)

    def win(s: int, h: int) -> bool:
        if is_subset(c, a.sat[s]):
            return True
        if h == 0:
            return False
        key = (s, h)
        hit = memo.get(key)
        if hit is None:
            hit = any(all(win(t, h - 1) for t in set(a.successors(s, y))) for y in ys)
            memo[key] = hit
        return hit

    return win(a.initial if start is None else start, horizon)


def _state_doc(a: ProductArena, s: int, sets: List[GoalSetDoc]) -> RelationStateDoc:
    sets.sort(key=lambda e: e["goals"])
    return {"id": s, "components": list(a.states[s]), "sets": sets}


def dump_relation(a: ProductArena, rel: "WinRelation | MaxRelation") -> RelationDoc:
    """Return the JSON document of a full or maximal relation."""
    states: List[RelationStateDoc] = []
    if isinstance(rel, WinRelation):
        for s in range(a.n_states):
            sets: List[GoalSetDoc] = [
                {"goals": label_list(c, a.labels), "rank": r}
                for c, r in rel.ranks[s].items()
            ]
            states.append(_state_doc(a, s, sets))
        kind = "full"
    else:
        for s in range(a.n_states):
            sets = [{"goals": label_list(c, a.labels)} for c in rel.get(s, ())]
            states.append(_state_doc(a, s, sets))
        kind = "maximal"
    return {"kind": kind, "goals": list(a.labels), "initial": a.initial, "states": states}
