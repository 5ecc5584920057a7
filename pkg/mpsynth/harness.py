"""Run strategies against environments and check what they achieve.

Goal satisfaction is judged either by a :class:`~mpsynth.spec.Spec`, whose
formulas are evaluated on the produced trace, or by a
:class:`~mpsynth.arena.ProductArena`, whose automata are run on it.
"""
from __future__ import annotations

import collections
import dataclasses
import logging
import random
from typing import Deque, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from typing_extensions import Literal

from .alphabet import Alphabet
from .arena import ProductArena
from .config import Limits
from .exceptions import ResourceError
from .formula import satisfied_goals
from .spec import Spec, format_goal_set
from .transducer import Transducer
from .utils import is_subset, label_list, mask_of

LOG = logging.getLogger(__name__)

Judge = Union[Spec, ProductArena]
SimVerdict = Literal["satisfied", "vacuous", "budget-exceeded", "strategy-error"]
Valuation = FrozenSet[str]


@dataclasses.dataclass(frozen=True)
class EnvPolicy:
    """How the environment picks inputs.

    Use the :meth:`random`, :meth:`exhaustive` and :meth:`scripted`
    constructors.
    """

    kind: Literal["random", "exhaustive", "scripted"]
    seed: int = 0
    depth: int = 0
    script: Tuple[Valuation, ...] = ()

    @classmethod
    def random(cls, seed: int = 0) -> EnvPolicy:
        return cls("random", seed=seed)

    @classmethod
    def exhaustive(cls, depth: int) -> EnvPolicy:
        return cls("exhaustive", depth=depth)

    @classmethod
    def scripted(cls, inputs: Sequence[Valuation]) -> EnvPolicy:
        return cls("scripted", script=tuple(frozenset(x) for x in inputs))


@dataclasses.dataclass
class SimResult:
    """One play of a strategy.

    :param trace: valuation per round, outputs and inputs together
    :param states: transducer state at the start of each round, plus the
        state reached last
    :param verdict: how the play ended
    :param goals: goal set the trace satisfies, ``0`` unless satisfied
    :param labels: goal labels of the judge
    """

    alphabet: Alphabet
    trace: List[Valuation]
    states: List[int]
    verdict: SimVerdict
    goals: int = 0
    labels: List[str] = dataclasses.field(default_factory=list)

    @property
    def rounds(self) -> int:
        return len(self.trace)

    @property
    def goal_labels(self) -> List[str]:
        return label_list(self.goals, self.labels)


def _labels(judge: Judge) -> List[str]:
    return list(judge.labels)


def _alphabet(judge: Judge) -> Alphabet:
    return judge.alphabet


def _satisfied(judge: Judge, trace: Sequence[Valuation]) -> int:
    if isinstance(judge, Spec):
        return mask_of(satisfied_goals(trace, judge.formulas))
    return mask_of(i for i, d in enumerate(judge.dfas) if d.is_final(d.run(trace)))


def _finish(
    judge: Judge, trace: List[Valuation], required: Optional[int]
) -> Tuple[SimVerdict, int]:
    if not trace:
        if required:
            return "strategy-error", 0
        return "vacuous", 0
    goals = _satisfied(judge, trace)
    if required is not None and not is_subset(required, goals):
        return "strategy-error", goals
    return "satisfied", goals


def simulate(
    judge: Judge,
    t: Transducer,
    env: EnvPolicy,
    max_rounds: int,
    required: Optional[int] = None,
) -> SimResult:
    """Play ``t`` against ``env`` for at most ``max_rounds`` rounds.

    Each round the strategy emits its output, then the environment picks an
    input. The play stops when the strategy is done.

    :param judge: spec or arena the goals are judged against
    :param t: strategy over the judge's alphabet
    :param env: a random or scripted environment
    :param max_rounds: round budget
    :param required: goal set the strategy claims to achieve, if any
    :raises ValueError: on an exhaustive policy, see :func:`verify_exhaustive`
    """
    if env.kind == "exhaustive":
        raise ValueError("exhaustive environments are checked by verify_exhaustive")
    alphabet = _alphabet(judge)
    if t.alphabet != alphabet:
        raise ValueError("strategy and judge use different alphabets")
    rng = random.Random(env.seed)
    q = t.initial
    trace: List[Valuation] = []
    states = [q]

    def result(verdict: SimVerdict, goals: int = 0) -> SimResult:
        return SimResult(alphabet, trace, states, verdict, goals, _labels(judge))

    while not t.states[q].done:
        if len(trace) >= max_rounds:
            return result("budget-exceeded")
        y = t.output(q)
        assert y is not None
        if env.kind == "random":
            x = rng.getrandbits(alphabet.n_inputs) if alphabet.n_inputs else 0
        elif len(trace) < len(env.script):
            x = alphabet.input_value(env.script[len(trace)])
        else:
            return result("budget-exceeded")
        trace.append(alphabet.output_set(y) | alphabet.input_set(x))
        try:
            q = t.step(q, x)
        except (IndexError, ValueError):
            LOG.debug("strategy has no move from state %s on input %s", q, x)
            return result("strategy-error")
        states.append(q)
    verdict, goals = _finish(judge, trace, required)
    return result(verdict, goals)


def verify_exhaustive(
    judge: Judge, t: Transducer, c: int, depth: int, limits: Optional[Limits] = None
) -> Union[Literal[True], List[Valuation]]:
    """Check ``t`` against every input sequence of length up to ``depth``.

    :param limits: resource ceilings, defaults to :meth:`Limits.from_env`
    :return: ``True`` if every play ends done with a trace satisfying
        ``c``, otherwise the lexicographically first failing input sequence
    :raises ResourceError: once more rounds are played than
        ``limits.max_exhaustive_rounds``
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    budget = (limits or Limits.from_env()).max_exhaustive_rounds
    played = 0
    alphabet = _alphabet(judge)
    order = list(alphabet.inputs_in_order())
    inputs: List[Valuation] = []
    trace: List[Valuation] = []

    def fails(q: int) -> bool:
        nonlocal played
        state = t.states[q]
        if state.done:
            verdict, _ = _finish(judge, trace, c)
            return verdict not in ("satisfied", "vacuous")
        if len(trace) == depth:
            return True
        assert state.output is not None
        emitted = alphabet.output_set(state.output)
        for x in order:
            played += 1
            if played > budget:
                raise ResourceError("exhaustive rounds", budget, f"depth {depth}")
            given = alphabet.input_set(x)
            inputs.append(given)
            trace.append(emitted | given)
            if fails(state.next[x]):
                return True
            inputs.pop()
            trace.pop()
        return False

    if fails(t.initial):
        LOG.info(
            "strategy for %s fails after %s inputs",
            format_goal_set(label_list(c, _labels(judge))),
            len(inputs),
        )
        return list(inputs)
    return True


def behaviorally_equal(t1: Transducer, t2: Transducer, depth: int) -> bool:
    """Decide whether two strategies emit the same outputs, and stop at the
    same time, on every input sequence of length up to ``depth``."""
    if t1.alphabet != t2.alphabet:
        return False
    width = 1 << t1.alphabet.n_inputs
    seen: Set[Tuple[int, int]] = {(t1.initial, t2.initial)}
    queue: Deque[Tuple[int, int, int]] = collections.deque([(t1.initial, t2.initial, 0)])
    while queue:
        p, q, level = queue.popleft()
        a, b = t1.states[p], t2.states[q]
        if a.output != b.output:
            return False
        if a.done or level == depth:
            continue
        for x in range(width):
            pair = (a.next[x], b.next[x])
            if pair not in seen:
                seen.add(pair)
                queue.append((pair[0], pair[1], level + 1))
    return True


def _shown(names: Sequence[str], true_atoms: Valuation) -> str:
    return "{" + ",".join(a for a in names if a in true_atoms) + "}"


def format_trace(result: SimResult) -> str:
    """One line per round: ``round i: Y={...} X={...} state=q``."""
    a = result.alphabet
    lines = [
        f"round {i}: Y={_shown(a.outputs, v)} X={_shown(a.inputs, v)} state={result.states[i]}"
        for i, v in enumerate(result.trace)
    ]
    goals = format_goal_set(result.goal_labels)
    lines.append(f"{result.verdict}: {goals} after {result.rounds} rounds")
    return "\n".join(lines) + "\n"
