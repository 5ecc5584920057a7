from __future__ import annotations

import logging
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from typing_extensions import Literal

from . import explicit, symbolic
from .arena import ProductArena, build_product
from .config import Limits, VarOrder
from .dfa import Dfa, build_dfa
from .enumeration import EnumReport, Mode, enumerate_maximal
from .spec import Spec
from .symbolic import StatsCallback, SymbolicArena, WinningFormulas
from .transducer import Transducer
from .types import RelationDoc
from .utils import Stopwatch, label_list, popcount

LOG = logging.getLogger(__name__)

Solver = Literal["explicit", "symbolic"]
Selection = Union[Iterable[str], Literal["maximum"]]


class Synthesizer:
    """Main touchpoint for the synthesis pipeline.

    One instance compiles specifications into automata and hands them to
    the solvers:

    - :meth:`compile` - one minimal automaton per goal
    - :meth:`product` - the explicit product arena
    - :meth:`solve` - the symbolic fixed point
    - :meth:`maximal` - maximal realizable goal sets at the initial state
    - :meth:`synthesize` - a strategy for chosen goals
    - :meth:`enumerate` - the pruned enumeration baseline

    :param limits: resource ceilings, defaults to :meth:`Limits.from_env`
    :param var_order: decision diagram variable order preset
    """

    def __init__(self, limits: Optional[Limits] = None, var_order: VarOrder = "blocked"):
        self.limits = limits or Limits.from_env()
        self.var_order: VarOrder = var_order

    def compile(self, spec: Spec) -> List[Dfa]:
        """Compile every goal of ``spec`` over the full alphabet."""
        atoms = spec.alphabet.atoms
        with Stopwatch() as watch:
            dfas = [build_dfa(g.formula, atoms, self.limits) for g in spec.goals]
        LOG.info(
            "compiled %s goals in %.1f ms: states %s",
            spec.n,
            watch.ms,
            [d.n_states for d in dfas],
        )
        return dfas

    def product(self, spec: Spec, dfas: Optional[Sequence[Dfa]] = None) -> ProductArena:
        dfas = self.compile(spec) if dfas is None else dfas
        arena = build_product(dfas, spec.alphabet, self.limits, spec.labels)
        LOG.info("product arena has %s states", arena.n_states)
        return arena

    def encode(self, spec: Spec, dfas: Optional[Sequence[Dfa]] = None) -> SymbolicArena:
        dfas = self.compile(spec) if dfas is None else dfas
        return symbolic.encode(
            dfas,
            spec.alphabet,
            labels=spec.labels,
            var_order=self.var_order,
            limits=self.limits,
        )

    def solve(
        self,
        spec: Spec,
        dfas: Optional[Sequence[Dfa]] = None,
        on_iteration: Optional[StatsCallback] = None,
    ) -> Tuple[SymbolicArena, WinningFormulas]:
        """Encode ``spec`` and run the symbolic fixed point."""
        a = self.encode(spec, dfas)
        with Stopwatch() as watch:
            wf = symbolic.symbolic_fixpoint(a, on_iteration)
        LOG.info(
            "symbolic fixed point: %s iterations in %.1f ms, %s nodes",
            wf.iterations,
            watch.ms,
            a.engine.size,
        )
        return a, wf

    def maximal(self, spec: Spec, solver: Solver = "symbolic") -> List[int]:
        """Return the maximal realizable goal sets at the initial state.

        :return: goal-set masks sorted by their label lists
        """
        dfas = self.compile(spec)
        if solver == "explicit":
            arena = self.product(spec, dfas)
            m = explicit.win_mm(arena, self.limits)
            return sorted(m[arena.initial], key=lambda c: label_list(c, spec.labels))
        a, wf = self.solve(spec, dfas)
        return symbolic.maximal_assignments(wf, a)

    def relation(self, spec: Spec, kind: Literal["full", "maximal"] = "maximal") -> RelationDoc:
        """Explicit winning relation as a JSON document."""
        arena = self.product(spec)
        if kind == "full":
            return explicit.dump_relation(arena, explicit.win_m(arena, self.limits))
        return explicit.dump_relation(arena, explicit.win_mm(arena, self.limits))

    def _pick(self, spec: Spec, candidates: List[int]) -> int:
        return min(candidates, key=lambda c: (-popcount(c), label_list(c, spec.labels)))

    def synthesize(
        self, spec: Spec, goals: Selection = "maximum", solver: Solver = "symbolic"
    ) -> Tuple[int, Transducer]:
        """Extract a strategy for a goal set.

        :param spec: the specification
        :param goals: labels of the goals to achieve, or ``"maximum"`` for the
            largest realizable set
        :param solver: which fixed point the strategy is read from
        :return: the goal-set mask and the strategy
        :raises UnrealizableError: if the chosen goals are not realizable
        :raises SpecError: on an unknown label
        """
        dfas = self.compile(spec)
        if solver == "explicit":
            arena = self.product(spec, dfas)
            w = explicit.win_m(arena, self.limits)
            if goals == "maximum":
                c = self._pick(spec, list(explicit.max_op(w.pairs())[arena.initial]))
            else:
                c = spec.mask_of(goals)
            return c, explicit.extract_strategy(arena, w, c)
        a, wf = self.solve(spec, dfas)
        c = (
            symbolic.maximum_assignment(wf, a)
            if goals == "maximum"
            else spec.mask_of(goals)
        )
        with Stopwatch() as watch:
            t = symbolic.symbolic_strategy(wf, a, c)
        LOG.info("extracted %s-state strategy in %.1f ms", t.n_states, watch.ms)
        return c, t

    def synthesize_all(
        self, spec: Spec, solver: Solver = "symbolic"
    ) -> List[Tuple[int, Transducer]]:
        """One strategy per maximal realizable goal set."""
        dfas = self.compile(spec)
        if solver == "explicit":
            arena = self.product(spec, dfas)
            w = explicit.win_m(arena, self.limits)
            sets = sorted(
                explicit.max_op(w.pairs())[arena.initial],
                key=lambda c: label_list(c, spec.labels),
            )
            return [(c, explicit.extract_strategy(arena, w, c)) for c in sets]
        a, wf = self.solve(spec, dfas)
        return [
            (c, symbolic.symbolic_strategy(wf, a, c))
            for c in symbolic.maximal_assignments(wf, a)
        ]

    def enumerate(
        self,
        spec: Spec,
        mode: Mode = "symbolic",
        workers: int = 1,
        timeout: Optional[float] = None,
    ) -> EnumReport:
        """Run the pruned enumeration baseline on ``spec``."""
        return enumerate_maximal(
            self.compile(spec),
            spec.alphabet,
            mode=mode,
            labels=spec.labels,
            limits=self.limits,
            workers=workers,
            timeout=timeout,
        )
