"""Parametric benchmark families and the head-to-head comparison runner."""
from __future__ import annotations

import concurrent.futures
import dataclasses
import logging
import random
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from typing_extensions import Literal, TypeAlias

from .arena import build_product
from .exceptions import ResourceError, SpecError
from .formula import (
    TRUE,
    Formula,
    always,
    atom,
    conj,
    eventually,
    implies,
    neg,
    next_,
    until,
    weak_next,
)
from .parser import parse_spec
from .pipeline import Synthesizer
from .spec import Spec
from .symbolic import block_width, maximal_assignments, maximum_assignment, symbolic_strategy
from .types import Agreement, IterationStats, ReportRow
from .utils import Deadline, Stopwatch, label_list

LOG = logging.getLogger(__name__)

Family: TypeAlias = Literal["chain", "until", "next", "counter", "robotnav"]
FAMILIES: List[Family] = ["chain", "until", "next", "counter", "robotnav"]


@dataclasses.dataclass(frozen=True)
class FamilyParams:
    """One benchmark instance.

    :param family: template name
    :param n: number of goals
    :param d: depth, length or width, depending on the family
    :param seed: drives the randomized choices of ``counter`` and ``robotnav``
    """

    family: Family
    n: int
    d: int
    seed: int = 0


def _label(i: int) -> str:
    return f"g{i + 1}"


def _until(p: FamilyParams) -> Spec:
    inputs = [f"x{i + 1}" for i in range(p.n)]
    outputs: List[str] = []
    goals: List[Tuple[str, Formula]] = []
    for i in range(p.n):
        names = [f"y{i + 1}_{j + 1}" for j in range(p.d)]
        outputs.extend(names)
        nested = atom(names[-1])
        for name in reversed(names[:-1]):
            nested = until(atom(name), nested)
        goals.append((_label(i), until(neg(atom(inputs[i])), nested)))
    return Spec.build(inputs, outputs, goals)


def _next(p: FamilyParams) -> Spec:
    inputs = [f"x{i + 1}" for i in range(p.n)]
    outputs = [f"y{i + 1}" for i in range(p.n)]
    goals: List[Tuple[str, Formula]] = []
    for i in range(p.n):
        f = atom(outputs[i])
        for _ in range(p.d):
            f = next_(f)
        goals.append((_label(i), implies(atom(inputs[i]), f)))
    return Spec.build(inputs, outputs, goals)


def _chain_goal(names: Sequence[str]) -> Formula:
    f = eventually(atom(names[-1]))
    for name in reversed(names[:-1]):
        f = eventually(conj(atom(name), next_(f)))
    return f


def _chain(p: FamilyParams) -> Spec:
    # chain 1, then chain k+1 followed by a goal forbidding the last steps of
    # chains k and k+1 at the same instant
    outputs: List[str] = []
    ends: List[str] = []
    goals: List[Tuple[str, Formula]] = []

    def add_chain() -> None:
        k = len(ends) + 1
        names = [f"y{k}_{j + 1}" for j in range(p.d)]
        outputs.extend(names)
        ends.append(names[-1])
        goals.append((_label(len(goals)), _chain_goal(names)))

    add_chain()
    while len(goals) < p.n:
        add_chain()
        if len(goals) < p.n:
            a, b = atom(ends[-2]), atom(ends[-1])
            goals.append((_label(len(goals)), always(neg(conj(a, b)))))
    return Spec.build([], outputs, goals)


def _equals(bits: Sequence[str], value: int) -> Formula:
    return conj(*(atom(b) if value >> j & 1 else neg(atom(b)) for j, b in enumerate(bits)))


def _keep(b: Formula) -> Formula:
    return conj(implies(b, weak_next(b)), implies(neg(b), weak_next(neg(b))))


def _flip(b: Formula) -> Formula:
    return conj(implies(b, weak_next(neg(b))), implies(neg(b), weak_next(b)))


def _counter(p: FamilyParams) -> Spec:
    rng = random.Random(p.seed)
    bits = [f"b{j}" for j in range(p.d)]
    inc = atom("inc")
    hold = conj(*(_keep(atom(b)) for b in bits))
    # bit j flips exactly when every lower bit carries
    step = conj(
        *(
            conj(
                implies(conj(*(atom(c) for c in bits[:j])), _flip(atom(b))),
                implies(neg(conj(*(atom(c) for c in bits[:j]))), _keep(atom(b))),
            )
            for j, b in enumerate(bits)
        )
    )
    counting = always(conj(implies(neg(inc), hold), implies(inc, step)))
    goals: List[Tuple[str, Formula]] = []
    for i in range(p.n):
        target = rng.randrange(1 << p.d)
        goals.append((_label(i), conj(eventually(_equals(bits, target)), counting)))
    return Spec.build(["inc"], bits, goals)


def _robotnav(p: FamilyParams) -> Spec:
    rng = random.Random(p.seed)
    width = block_width(p.d)
    rows = [f"r{j}" for j in range(width)]
    cols = [f"c{j}" for j in range(width)]
    door = atom("door")
    goals: List[Tuple[str, Formula]] = []
    for i in range(p.n):
        row, col = rng.randrange(p.d), rng.randrange(p.d)
        at = conj(_equals(rows, row), _equals(cols, col)) if width else TRUE
        reach = conj(at, door) if rng.random() < 0.25 else at
        # every region is entered through a one-way corridor
        trapped = always(implies(at, weak_next(at)))
        goals.append((_label(i), conj(eventually(reach), trapped)))
    return Spec.build(["door"], rows + cols, goals)


_GENERATORS: Dict[str, Callable[[FamilyParams], Spec]] = {
    "chain": _chain,
    "until": _until,
    "next": _next,
    "counter": _counter,
    "robotnav": _robotnav,
}


def generate(p: FamilyParams) -> str:
    """Return the ``.mpl`` text of one benchmark instance.

    The text depends on nothing but ``p``.

    :raises SpecError: on an unknown family or a parameter below one
    """
    if p.family not in _GENERATORS:
        raise SpecError(f"unknown benchmark family: {p.family}")
    if p.n < 1 or p.d < 1:
        raise SpecError(f"benchmark parameters must be positive, got n={p.n} d={p.d}")
    spec = _GENERATORS[p.family](p)
    header = f"# {p.family} n={p.n} d={p.d} seed={p.seed}\n"
    return header + spec.to_text()


@dataclasses.dataclass
class Comparison:
    """Outcome of :func:`run_comparison`.

    :param row: the report row
    :param maximum: goal set the strategy was extracted for, ``None`` if the
        run stopped early
    :param maximal: maximal sets found by the symbolic solver
    :param enum_maximal: maximal sets found by enumeration, ``None`` if not run
    :param partial: ``True`` if a deadline cut the run short
    """

    row: ReportRow
    maximum: Optional[List[str]] = None
    maximal: List[List[str]] = dataclasses.field(default_factory=list)
    enum_maximal: Optional[List[List[str]]] = None
    partial: bool = False


def run_comparison(
    spec: Spec,
    timeout: Optional[float] = None,
    *,
    family: str = "",
    d: int = 0,
    compare: bool = True,
    synthesizer: Optional[Synthesizer] = None,
    on_iteration: Optional[Callable[[IterationStats], None]] = None,
) -> Comparison:
    """Run the symbolic pipeline and the enumeration baseline on ``spec``.

    :param spec: the instance
    :param timeout: seconds for the whole comparison
    :param family: family name for the report row
    :param d: family parameter for the report row
    :param compare: also run the enumeration baseline
    :param synthesizer: pipeline configuration, the default one if ``None``
    :param on_iteration: receives per-iteration fixed-point statistics
    :return: the comparison; on timeout the row is partial and ``agree`` is
        ``"unknown"``
    """
    synth = synthesizer or Synthesizer()
    deadline = Deadline(timeout)
    row: ReportRow = {
        "family": family,
        "n": spec.n,
        "d": d,
        "states": None,
        "mpsynth_fixpoint_ms": 0.0,
        "mpsynth_extract_ms": 0.0,
        "enum_ms": None,
        "agree": "unknown",
    }
    result = Comparison(row)

    def tick(stats: IterationStats) -> None:
        if on_iteration is not None:
            on_iteration(stats)
        deadline.check("symbolic fixed point")

    try:
        with Stopwatch() as watch:
            dfas = synth.compile(spec)
            a, wf = synth.solve(spec, dfas, on_iteration=tick)
        row["mpsynth_fixpoint_ms"] = watch.ms
        with Stopwatch() as watch:
            c = maximum_assignment(wf, a)
            symbolic_strategy(wf, a, c)
        row["mpsynth_extract_ms"] = watch.ms
        result.maximum = label_list(c, spec.labels)
        result.maximal = [label_list(m, spec.labels) for m in maximal_assignments(wf, a)]
        try:
            row["states"] = build_product(dfas, spec.alphabet, synth.limits).n_states
        except ResourceError as e:
            LOG.debug("no explicit arena: %s", e)
        deadline.check("symbolic pipeline")
        if compare:
            remaining = None
            if timeout is not None:
                remaining = max(0.0, timeout - deadline.elapsed)
            with Stopwatch() as watch:
                report = synth.enumerate(spec, timeout=remaining)
            row["enum_ms"] = watch.ms
            result.enum_maximal = report.maximal_labels
            agree: Agreement = "unknown"
            if report.complete:
                agree = "true" if report.maximal_labels == result.maximal else "false"
            row["agree"] = agree
            deadline.check("enumeration")
    except ResourceError as e:
        result.partial = True
        LOG.warning("partial comparison for %s n=%s: %s", family or "spec", spec.n, e)
    return result


def _instance(
    p: FamilyParams, timeout: Optional[float], compare: bool
) -> Tuple[ReportRow, List[Dict[str, Any]]]:
    stats: List[Dict[str, Any]] = []

    def record(s: IterationStats) -> None:
        stats.append({"family": p.family, "n": p.n, "d": p.d, "seed": p.seed, **s})

    spec = parse_spec(generate(p))
    result = run_comparison(
        spec, timeout, family=p.family, d=p.d, compare=compare, on_iteration=record
    )
    return result.row, stats


def run_family(
    params: Sequence[FamilyParams],
    workers: int = 1,
    timeout: Optional[float] = None,
    compare: bool = True,
) -> Tuple[List[ReportRow], List[Dict[str, Any]]]:
    """Run many instances, in worker processes when ``workers`` is above one.

    :return: report rows in the order of ``params`` and the per-iteration
        statistics records of every instance
    """
    rows: List[ReportRow] = []
    stats: List[Dict[str, Any]] = []
    if workers <= 1:
        outcomes = [_instance(p, timeout, compare) for p in params]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_instance, p, timeout, compare) for p in params]
            outcomes = [f.result() for f in futures]
    for row, records in outcomes:
        rows.append(row)
        stats.extend(records)
    return rows, stats
