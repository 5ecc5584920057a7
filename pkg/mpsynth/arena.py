from __future__ import annotations

import collections
import logging
from typing import Deque, Dict, FrozenSet, List, Optional, Sequence, Tuple

from .alphabet import Alphabet, project
from .config import Limits
from .dfa import Dfa, describe_cubes
from .bdd import Engine
from .exceptions import ResourceError, SpecError
from .utils import bits

LOG = logging.getLogger(__name__)

#: goal-set bitmasks are limited to this many goals
MAX_GOALS = 30

ProductState = Tuple[int, ...]


class ProductArena:
    """Reachable part of the component-wise product of goal automata.

    States are interned in breadth-first order from the tuple of initial
    states, so the initial state is ``0``. Symbols are packed as described
    by :class:`~mpsynth.alphabet.Alphabet`.

    :param alphabet: the partitioned atoms
    :param dfas: one automaton per goal
    :param states: product state tuples in index order
    :param delta: ``delta[s][symbol]`` successor index
    :param labels: goal labels, ``g1..gn`` by default
    """

    def __init__(
        self,
        alphabet: Alphabet,
        dfas: Sequence[Dfa],
        states: List[ProductState],
        delta: List[List[int]],
        labels: Optional[Sequence[str]] = None,
    ):
        self.alphabet = alphabet
        self.dfas = tuple(dfas)
        self.labels = list(labels or [f"g{i + 1}" for i in range(len(self.dfas))])
        self.states = states
        self.delta = delta
        self.initial = 0
        self._index = {t: i for i, t in enumerate(states)}
        self.sat: List[int] = [
            sum(1 << i for i, d in enumerate(self.dfas) if d.is_final(t[i]))
            for t in states
        ]

    def __repr__(self) -> str:
        return f"ProductArena(states={self.n_states}, goals={self.n_goals})"

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_goals(self) -> int:
        return len(self.dfas)

    @property
    def full_mask(self) -> int:
        return (1 << self.n_goals) - 1

    def index_of(self, state: ProductState) -> int:
        try:
            return self._index[tuple(state)]
        except KeyError:
            raise KeyError(f"unreachable product state {state}") from None

    def successor(self, s: int, y: int, x: int) -> int:
        return self.delta[s][self.alphabet.symbol(x, y)]

    def successors(self, s: int, y: int) -> List[int]:
        """Successors of ``s`` under output ``y`` for every input, in input
        value order."""
        row = self.delta[s]
        shift = self.alphabet.n_inputs
        return [row[x | (y << shift)] for x in range(1 << shift)]

    def accepting(self, goal: int) -> FrozenSet[int]:
        """Product states whose ``goal``-th component accepts."""
        return frozenset(s for s, m in enumerate(self.sat) if m >> goal & 1)


def build_product(
    dfas: Sequence[Dfa],
    alphabet: Alphabet,
    limits: Optional[Limits] = None,
    labels: Optional[Sequence[str]] = None,
) -> ProductArena:
    """Build the reachable product arena of ``dfas``.

    :param dfas: automata over ``alphabet.atoms``, one per goal
    :param alphabet: the partitioned atoms
    :param limits: resource ceilings, defaults to :meth:`Limits.from_env`
    :param labels: goal labels
    :return: the arena, initial state ``0``
    :raises SpecError: if an automaton is over different atoms or there are
        no goals or too many
    :raises ResourceError: on too many atoms or product states
    """
    limits = limits or Limits.from_env()
    if not 1 <= len(dfas) <= MAX_GOALS:
        raise SpecError(f"product needs 1 to {MAX_GOALS} automata, got {len(dfas)}")
    for d in dfas:
        if d.atoms != alphabet.atoms:
            raise SpecError(
                f"automaton over {list(d.atoms)} does not match {list(alphabet.atoms)}"
            )
    if alphabet.size > limits.max_explicit_atoms:
        raise ResourceError("explicit alphabet atoms", limits.max_explicit_atoms)
    width = 1 << alphabet.size
    columns = [[project(sym, d.support) for sym in range(width)] for d in dfas]

    start = tuple(d.initial for d in dfas)
    states: List[ProductState] = [start]
    index: Dict[ProductState, int] = {start: 0}
    delta: List[List[int]] = []
    queue: Deque[int] = collections.deque([0])
    while queue:
        s = queue.popleft()
        t = states[s]
        rows = [d.table[q] for d, q in zip(dfas, t)]
        cache: Dict[ProductState, int] = {}
        row: List[int] = []
        for sym in range(width):
            succ = tuple(r[col[sym]] for r, col in zip(rows, columns))
            target = cache.get(succ)
            if target is None:
                target = index.get(succ)
                if target is None:
                    target = len(states)
                    if target >= limits.max_product_states:
                        raise ResourceError(
                            "product states", limits.max_product_states
                        )
                    index[succ] = target
                    states.append(succ)
                    queue.append(target)
                cache[succ] = target
            row.append(target)
        delta.append(row)
    LOG.debug("built product arena: %s states, %s goals", len(states), len(dfas))
    return ProductArena(alphabet, dfas, states, delta, labels)


def sat_goals(a: ProductArena, s: int) -> int:
    """Return the largest goal set (as a bitmask) that state ``s`` satisfies."""
    return a.sat[s]


def to_dot(a: ProductArena, name: str = "arena") -> str:
    """Render ``a`` in DOT, each state annotated with the goals it satisfies."""
    atoms = list(a.alphabet.atoms)
    engine = Engine(atoms)
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  init [shape=point];"]
    for s, t in enumerate(a.states):
        goals = ",".join(a.labels[i] for i in bits(a.sat[s]))
        lines.append(f'  s{s} [label="s{s} {list(t)}\\n{{{goals}}}"];')
    lines.append(f"  init -> s{a.initial};")
    for s in range(a.n_states):
        targets: Dict[int, int] = {}
        for sym, t in enumerate(a.delta[s]):
            targets[t] = targets.get(t, 0) | (1 << sym)
        for t in sorted(targets):
            f = engine.from_truth_table(atoms, targets[t])
            label = describe_cubes(engine.cubes(f), atoms)
            lines.append(f'  s{s} -> s{t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
