"""Symbolic multi-property synthesis over decision diagrams.

Each goal automaton gets a block of binary state variables; one goal
variable per goal lets a single function ``w(Z, K)`` describe, for every
state, every goal set realizable from it.
"""
from __future__ import annotations

import collections
import dataclasses
import logging
import math
import time
from typing import Callable, Deque, Dict, List, Optional, Sequence, Set, Tuple

from .alphabet import Alphabet
from .bdd import Assignment, BoolFn, Engine
from .config import Limits, VarOrder, variable_order
from .dfa import Dfa
from .exceptions import InvariantError, ResourceError, SpecError, UnrealizableError
from .transducer import Transducer, TransducerState
from .types import IterationStats
from .utils import label_list, popcount

LOG = logging.getLogger(__name__)

ProductState = Tuple[int, ...]
StatsCallback = Callable[[IterationStats], None]


def block_width(n_states: int) -> int:
    """Bits needed to number ``n_states`` states."""
    return (n_states - 1).bit_length()


@dataclasses.dataclass
class SymbolicArena:
    """Binary encoding of a product of goal automata.

    :param engine: the engine owning every function below
    :param alphabet: the partitioned atoms
    :param dfas: one automaton per goal
    :param labels: goal labels
    :param blocks: state variable names per goal, least significant bit first
    :param goal_vars: one goal variable per goal
    :param eta: next-state function per state variable
    :param accept: acceptance function per goal, over its own block
    """

    engine: Engine
    alphabet: Alphabet
    dfas: Tuple[Dfa, ...]
    labels: List[str]
    blocks: List[List[str]]
    goal_vars: List[str]
    eta: Dict[str, BoolFn]
    accept: List[BoolFn]

    @property
    def n_goals(self) -> int:
        return len(self.dfas)

    @property
    def state_vars(self) -> List[str]:
        return [v for block in self.blocks for v in block]

    @property
    def initial(self) -> ProductState:
        return tuple(d.initial for d in self.dfas)

    def state_encoding(self, state: ProductState) -> Assignment:
        """Assignment of the state variables spelling ``state``."""
        if len(state) != self.n_goals:
            raise ValueError(f"expected {self.n_goals} components, got {len(state)}")
        out: Assignment = {}
        for block, q in zip(self.blocks, state):
            for b, v in enumerate(block):
                out[v] = bool(q >> b & 1)
        return out

    def goal_encoding(self, c: int) -> Assignment:
        """Assignment of the goal variables selecting the goal set ``c``."""
        return {k: bool(c >> i & 1) for i, k in enumerate(self.goal_vars)}

    def decode_state(self, assignment: Assignment) -> ProductState:
        return tuple(
            sum(1 << b for b, v in enumerate(block) if assignment[v]) for block in self.blocks
        )

    def successor(self, state: ProductState, y: int, x: int) -> ProductState:
        """Evaluate the next-state functions bit by bit."""
        point = self.state_encoding(state)
        true_atoms = self.alphabet.decode(self.alphabet.symbol(x, y))
        point.update((name, name in true_atoms) for name in self.alphabet.atoms)
        bits = {v: self.engine.evaluate_fn(f, point) for v, f in self.eta.items()}
        return self.decode_state(bits)


@dataclasses.dataclass(frozen=True)
class WinningFormulas:
    """Result of the symbolic fixed point.

    ``layers[j]`` holds the pairs ``(Z, K)`` realizable within ``j`` steps,
    so ``layers[0]`` is the initial function and ``layers[-1]`` the fixed
    point. The move function is rebuilt from them on demand, see
    :func:`move_relation`.
    """

    layers: Tuple[BoolFn, ...]
    iterations: int

    @property
    def w(self) -> BoolFn:
        return self.layers[-1]

    @property
    def w0(self) -> BoolFn:
        return self.layers[0]


def encode(
    dfas: Sequence[Dfa],
    alphabet: Alphabet,
    engine: Optional[Engine] = None,
    labels: Optional[Sequence[str]] = None,
    var_order: VarOrder = "blocked",
    limits: Optional[Limits] = None,
) -> SymbolicArena:
    """Encode the product of ``dfas`` into decision diagrams.

    States are numbered as in each automaton and spelled in binary over the
    goal's block, least significant bit first. Next-state functions depend
    on an automaton's support atoms only.

    :param dfas: one automaton per goal, over ``alphabet.atoms``
    :param alphabet: the partitioned atoms
    :param engine: engine to declare variables in; a fresh one by default
    :param labels: goal labels, ``g1..gn`` by default
    :param var_order: variable order preset
    :param limits: resource ceilings, defaults to :meth:`Limits.from_env`
    :raises SpecError: if an automaton is over different atoms
    :raises EngineError: if ``engine`` already declares a needed variable
    """
    limits = limits or Limits.from_env()
    if not dfas:
        raise SpecError("nothing to encode")
    for d in dfas:
        if d.atoms != alphabet.atoms:
            raise SpecError(
                f"automaton over {list(d.atoms)} does not match {list(alphabet.atoms)}"
            )
    if engine is None:
        engine = Engine(node_ceiling=limits.node_ceiling)
    n = len(dfas)
    # brackets keep these apart from atom names
    blocks = [[f"z{i + 1}[{b}]" for b in range(block_width(d.n_states))] for i, d in enumerate(dfas)]
    goal_vars = [f"k[{i + 1}]" for i in range(n)]
    engine.declare(
        *variable_order(blocks, goal_vars, list(alphabet.outputs), list(alphabet.inputs), var_order)
    )

    eta: Dict[str, BoolFn] = {}
    accept: List[BoolFn] = []
    for d, block in zip(dfas, blocks):
        codes = [engine.cube({v: bool(q >> b & 1) for b, v in enumerate(block)}) for q in range(d.n_states)]
        names = d.support_names
        for b, v in enumerate(block):
            parts: List[BoolFn] = []
            for q, row in enumerate(d.table):
                table = sum(1 << c for c, t in enumerate(row) if t >> b & 1)
                if table:
                    parts.append(codes[q] & engine.from_truth_table(names, table))
            eta[v] = engine.disjoin(parts)
        accept.append(engine.disjoin(codes[q] for q in sorted(d.finals)))
    LOG.debug(
        "encoded %s automata: %s state variables, %s nodes",
        n,
        sum(len(b) for b in blocks),
        engine.size,
    )
    return SymbolicArena(
        engine,
        alphabet,
        tuple(dfas),
        list(labels or [f"g{i + 1}" for i in range(n)]),
        blocks,
        goal_vars,
        eta,
        accept,
    )


def initial_winning(a: SymbolicArena) -> BoolFn:
    """Return ``w0 = AND_i (k_i -> f_i)``."""
    e = a.engine
    return e.conjoin(e.var(k).implies(f) for k, f in zip(a.goal_vars, a.accept))


def _iteration_bound(a: SymbolicArena) -> int:
    """Product states times goal sets, over the valid state codes."""
    return math.prod(d.n_states for d in a.dfas) << a.n_goals


Schedule = List[Tuple[List[Tuple[str, BoolFn]], Set[str], Set[str]]]


def _schedule(a: SymbolicArena, project: bool = False) -> Schedule:
    """Blocks deepest first, each with the atoms to abstract after it.

    An input is abstracted universally once no remaining block reads it.
    With ``project``, an output is abstracted existentially once no
    remaining block reads it and every input is gone.
    """
    inputs = set(a.alphabet.inputs)
    outputs = set(a.alphabet.outputs)
    reads = [set(d.support_names) for d in a.dfas]
    order = list(reversed(range(a.n_goals)))
    steps: Schedule = []
    projected: Set[str] = set()
    for pos, i in enumerate(order):
        later: Set[str] = set().union(*(reads[j] for j in order[pos + 1 :]))
        universal = (reads[i] & inputs) - later
        existential: Set[str] = set()
        if project and not later & inputs:
            existential = outputs - later - projected
            projected |= existential
        steps.append(([(v, a.eta[v]) for v in a.blocks[i]], universal, existential))
    return steps


def _predecessor(e: Engine, w: BoolFn, schedule: Schedule) -> BoolFn:
    """Return ``w[Z := eta]`` with the scheduled atoms abstracted.

    Next-state functions of one block read only that block, so the blocks
    are substituted one at a time. Every universal step precedes every
    existential one, so a projecting schedule yields
    ``exists Y. forall X. w[Z := eta]`` and a plain one
    ``forall X. w[Z := eta]``.
    """
    g = w
    for bindings, universal, existential in schedule:
        g = e.vector_compose(g, bindings)
        if universal:
            g = e.forall(universal, g)
        if existential:
            g = e.exists(existential, g)
    return g


def _iterate(
    a: SymbolicArena,
    w0: BoolFn,
    on_iteration: Optional[StatsCallback],
) -> WinningFormulas:
    e = a.engine
    schedule = _schedule(a, project=True)
    bound = _iteration_bound(a)
    layers = [w0]
    w = w0
    i = 0
    started = time.perf_counter()
    while True:
        try:
            pre = _predecessor(e, w, schedule)
            w_next = w | pre
        except ResourceError as exc:
            raise ResourceError(exc.limit, exc.value, f"iteration {i + 1}") from exc
        i += 1
        if on_iteration is not None:
            on_iteration(
                {
                    "iteration": i,
                    "w_nodes": e.node_count(w_next),
                    "pre_nodes": e.node_count(pre),
                    "engine_nodes": e.size,
                    "elapsed_ms": (time.perf_counter() - started) * 1000,
                }
            )
        if w_next == w:
            LOG.debug("symbolic fixed point stable after %s iterations", i)
            return WinningFormulas(tuple(layers), i)
        # one extra layer for codes past a block's last state
        if i > bound + 1:
            raise InvariantError(f"fixed point exceeded {bound} iterations")
        layers.append(w_next)
        w = w_next


def symbolic_fixpoint(
    a: SymbolicArena, on_iteration: Optional[StatsCallback] = None
) -> WinningFormulas:
    """Run the multi-property fixed point from :func:`initial_winning`.

    :param a: the encoded arena
    :param on_iteration: called with node counts after every iteration
    :raises ResourceError: if the engine's node ceiling is hit; the message
        names the iteration
    """
    return _iterate(a, initial_winning(a), on_iteration)


def solve_single_symbolic(
    a: SymbolicArena, on_iteration: Optional[StatsCallback] = None
) -> WinningFormulas:
    """Single-property fixed point for the conjunction of every goal.

    Goal variables stay free; the result does not depend on them.
    """
    return _iterate(a, a.engine.conjoin(a.accept), on_iteration)


def _at(wf: WinningFormulas, a: SymbolicArena, state: Optional[ProductState]) -> BoolFn:
    return a.engine.restrict(wf.w, a.state_encoding(a.initial if state is None else state))


def query_realizable(
    wf: WinningFormulas, a: SymbolicArena, state: Optional[ProductState], c: int
) -> bool:
    """Read off ``w`` whether goal set ``c`` is realizable from ``state``.

    :param state: component states, the initial state when ``None``
    """
    point = a.state_encoding(a.initial if state is None else state)
    point.update(a.goal_encoding(c))
    return a.engine.evaluate_fn(wf.w, point)


def maximal_assignments(
    wf: WinningFormulas, a: SymbolicArena, state: Optional[ProductState] = None
) -> List[int]:
    """All subset-maximal goal sets realizable from ``state``.

    Each round picks a model, grows it greedily by ascending goal index and
    then blocks every subset of the grown set.

    :return: goal-set masks sorted by their label lists
    """
    e = a.engine
    g = _at(wf, a, state)
    found: List[int] = []
    while True:
        pick = e.pick_assignment(g, a.goal_vars)
        if pick is None:
            break
        m = sum(1 << i for i, k in enumerate(a.goal_vars) if pick[k])
        for i in range(a.n_goals):
            if m >> i & 1:
                continue
            point = a.goal_encoding(m | 1 << i)
            if e.evaluate_fn(e.restrict(g, point), {}):
                m |= 1 << i
        found.append(m)
        g = g & e.disjoin(e.var(k) for i, k in enumerate(a.goal_vars) if not m >> i & 1)
    if not found:
        raise InvariantError("empty goal set is not realizable")
    return sorted(found, key=lambda m: label_list(m, a.labels))


def maximum_assignment(
    wf: WinningFormulas, a: SymbolicArena, state: Optional[ProductState] = None
) -> int:
    """The largest maximal goal set; ties go to the least sorted label list."""
    return min(
        maximal_assignments(wf, a, state),
        key=lambda m: (-popcount(m), label_list(m, a.labels)),
    )


def _least_output(e: Engine, moves: BoolFn, outputs: Sequence[str]) -> Assignment:
    chosen: Assignment = {}
    for y in outputs:
        low = e.restrict(moves, {y: False})
        if not low.is_false:
            chosen[y] = False
            moves = low
        else:
            chosen[y] = True
            moves = e.restrict(moves, {y: True})
    return chosen


def _rank(layers: Sequence[BoolFn], e: Engine, point: Assignment) -> Optional[int]:
    for j, layer in enumerate(layers):
        if e.evaluate_fn(layer, point):
            return j
    return None


def symbolic_strategy(wf: WinningFormulas, a: SymbolicArena, c: int) -> Transducer:
    """Materialize a transducer for goal set ``c`` from the layers.

    A state first realizing ``c`` at layer ``j > 0`` moves into layer
    ``j - 1``; outputs are fixed one at a time in declaration order,
    preferring false while a winning move remains. States where ``w0``
    holds under ``c`` are done.

    :raises UnrealizableError: if ``c`` is not realizable initially
    """
    if not query_realizable(wf, a, None, c):
        raise UnrealizableError(label_list(c, a.labels))
    e = a.engine
    goals = a.goal_encoding(c)
    layers = [e.restrict(layer, goals) for layer in wf.layers]
    inputs = set(a.alphabet.inputs)
    outputs = list(a.alphabet.outputs)
    start = a.initial
    ids: Dict[ProductState, int] = {start: 0}
    queue: Deque[ProductState] = collections.deque([start])
    built: List[TransducerState] = []
    while queue:
        state = queue.popleft()
        point = a.state_encoding(state)
        j = _rank(layers, e, point)
        if j is None:
            raise InvariantError(f"strategy left the winning region at {state}")
        if j == 0:
            built.append(TransducerState(None))
            continue
        local = [(v, e.restrict(f, point)) for v, f in a.eta.items()]
        moves = e.forall(inputs, e.vector_compose(layers[j - 1], local))
        if moves.is_false:
            raise InvariantError(f"no winning move at {state}")
        y = a.alphabet.output_value({v for v, on in _least_output(e, moves, outputs).items() if on})
        nxt: List[int] = []
        for x in range(1 << a.alphabet.n_inputs):
            succ = a.successor(state, y, x)
            if succ not in ids:
                ids[succ] = len(ids)
                queue.append(succ)
            nxt.append(ids[succ])
        built.append(TransducerState(y, tuple(nxt)))
    return Transducer(a.alphabet, built)


def move_relation(wf: WinningFormulas, a: SymbolicArena) -> BoolFn:
    """Winning moves over state, goal and output variables.

    A pair first realizable at layer ``j`` may play any output forcing
    layer ``j - 1``; pairs of ``w0`` allow every output. Projecting the
    outputs away gives back ``w``.
    """
    e = a.engine
    schedule = _schedule(a)
    t = wf.w0
    for before in wf.layers[:-1]:
        t = t | (~before & _predecessor(e, before, schedule))
    return t


def to_dot(wf: WinningFormulas, a: SymbolicArena) -> str:
    return a.engine.to_dot({"w": wf.w, "t": move_relation(wf, a)})
