"""Compilation of LTLf formulas into minimal deterministic automata.

The construction follows formula derivatives: the state reached after a
word is the obligation the rest of the trace still has to meet. Reading a
symbol rewrites the obligation with :func:`derive`, and a state accepts iff
its obligation is met by the empty remainder (:func:`eps_accept`).
Obligations that are propositionally equivalent, treating temporal
subformulas as opaque variables, share one state, which keeps the state
space finite.
"""
from __future__ import annotations

import collections
import dataclasses
import logging
from typing import AbstractSet, Deque, Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .alphabet import project
from .bdd import BoolFn, Engine
from .config import Limits
from .exceptions import ResourceError, UndeclaredAtomError
from .formula import FALSE, TRUE, Formula, Op, atoms, conj, desugar, disj, neg, until

LOG = logging.getLogger(__name__)

#: holds exactly on non-empty remainders
NONEMPTY = until(TRUE, TRUE)


@dataclasses.dataclass(frozen=True)
class Dfa:
    """A complete deterministic automaton over ``2^atoms``.

    The table is dense over the atoms the automaton depends on: column ``c``
    of ``table[q]`` is the successor for every symbol whose ``support`` bits
    spell ``c``.
    """

    atoms: Tuple[str, ...]
    # indices into atoms, ascending
    support: Tuple[int, ...]
    table: Tuple[Tuple[int, ...], ...]
    initial: int
    finals: FrozenSet[int]

    @property
    def n_states(self) -> int:
        return len(self.table)

    @property
    def support_names(self) -> List[str]:
        return [self.atoms[j] for j in self.support]

    def delta(self, q: int, symbol: int) -> int:
        """Successor of ``q`` on a symbol over all of ``atoms``."""
        return self.table[q][project(symbol, self.support)]

    def step(self, q: int, valuation: AbstractSet[str]) -> int:
        local = 0
        for j, p in enumerate(self.support):
            if self.atoms[p] in valuation:
                local |= 1 << j
        return self.table[q][local]

    def run(self, trace: Sequence[AbstractSet[str]]) -> int:
        q = self.initial
        for valuation in trace:
            for name in valuation:
                if name not in self.atoms:
                    raise UndeclaredAtomError(name)
            q = self.step(q, valuation)
        return q

    def is_final(self, q: int) -> bool:
        return q in self.finals


def eps_accept(f: Formula) -> bool:
    """Decide whether the empty remainder meets the obligation ``f``.

    :raises ValueError: if ``f`` has a non-core operator
    """
    op = f.op
    if op is Op.TRUE or op is Op.WEAK_NEXT:
        return True
    if op in (Op.FALSE, Op.ATOM, Op.NEXT, Op.UNTIL):
        return False
    if op is Op.NOT:
        return not eps_accept(f.args[0])
    if op is Op.AND:
        return all(eps_accept(a) for a in f.args)
    if op is Op.OR:
        return any(eps_accept(a) for a in f.args)
    raise ValueError(f"non-core operator {op.name}; desugar first")


class _Deriver:
    """Memoized derivatives for one symbol at a time."""

    def __init__(self) -> None:
        self._acc: Dict[Formula, bool] = {}
        self._memo: Dict[Tuple[Formula, FrozenSet[str]], Formula] = {}

    def accepts(self, f: Formula) -> bool:
        hit = self._acc.get(f)
        if hit is None:
            hit = self._acc[f] = eps_accept(f)
        return hit

    def derive(self, f: Formula, sym: FrozenSet[str]) -> Formula:
        key = (f, sym)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        op = f.op
        if op is Op.TRUE or op is Op.FALSE:
            r = f
        elif op is Op.ATOM:
            r = TRUE if f.name in sym else FALSE
        elif op is Op.NOT:
            r = neg(self.derive(f.args[0], sym))
        elif op is Op.AND:
            r = conj(*(self.derive(a, sym) for a in f.args))
        elif op is Op.OR:
            r = disj(*(self.derive(a, sym) for a in f.args))
        elif op is Op.NEXT:
            body = f.args[0]
            r = conj(body, NONEMPTY) if self.accepts(body) else body
        elif op is Op.WEAK_NEXT:
            body = f.args[0]
            r = body if self.accepts(body) else disj(body, neg(NONEMPTY))
        elif op is Op.UNTIL:
            a, b = f.args
            r = disj(self.derive(b, sym), conj(self.derive(a, sym), f))
        else:
            raise ValueError(f"non-core operator {op.name}; desugar first")
        self._memo[key] = r
        return r


def derive(f: Formula, sym: AbstractSet[str]) -> Formula:
    """Return the obligation left after reading one symbol.

    :param f: core formula
    :param sym: the atoms true in the symbol
    :return: normalized residual obligation
    """
    return _Deriver().derive(f, frozenset(sym))


class _Abstraction:
    """Boolean skeleton of obligations, temporal subformulas as variables."""

    def __init__(self) -> None:
        self.engine = Engine()
        self._leaves: Dict[Formula, str] = {}
        self._memo: Dict[Formula, BoolFn] = {}

    def key(self, f: Formula) -> int:
        return self._fn(f).node

    def _fn(self, f: Formula) -> BoolFn:
        hit = self._memo.get(f)
        if hit is not None:
            return hit
        e = self.engine
        op = f.op
        if op is Op.TRUE:
            r = e.true
        elif op is Op.FALSE:
            r = e.false
        elif op is Op.NOT:
            r = e.negate(self._fn(f.args[0]))
        elif op is Op.AND:
            r = e.conjoin(self._fn(a) for a in f.args)
        elif op is Op.OR:
            r = e.disjoin(self._fn(a) for a in f.args)
        else:
            name = f"v{len(self._leaves)}"
            self._leaves[f] = name
            e.declare(name)
            r = e.var(name)
        self._memo[f] = r
        return r


def _valuations(names: Sequence[str]) -> List[FrozenSet[str]]:
    return [
        frozenset(a for j, a in enumerate(names) if local >> j & 1)
        for local in range(1 << len(names))
    ]


def build_dfa(
    f: Formula, ap: Sequence[str], limits: Optional[Limits] = None
) -> Dfa:
    """Compile ``f`` into the minimal automaton of its satisfying traces.

    :param f: formula over any operators
    :param ap: the full ordered atom list; ``atoms(f)`` must be a subset
    :param limits: resource ceilings, defaults to :meth:`Limits.from_env`
    :return: minimized automaton with canonical state numbering
    :raises UndeclaredAtomError: if ``f`` mentions an atom outside ``ap``
    :raises ResourceError: if the state or support ceiling is exceeded
    """
    limits = limits or Limits.from_env()
    ap = tuple(ap)
    used = atoms(f)
    for name in sorted(used):
        if name not in ap:
            raise UndeclaredAtomError(name)
    support = tuple(j for j, name in enumerate(ap) if name in used)
    if len(support) > limits.max_support:
        raise ResourceError(
            "automaton support atoms", limits.max_support, f"formula uses {len(support)}"
        )
    valuations = _valuations([ap[j] for j in support])
    core = desugar(f)
    deriver = _Deriver()
    skeleton = _Abstraction()

    # state 0 is the initial state: it never accepts, the empty trace
    # satisfies nothing
    obligations: List[Formula] = [core]
    finals: Set[int] = set()
    index: Dict[int, int] = {}
    table: List[List[int]] = []
    queue: Deque[int] = collections.deque([0])
    while queue:
        q = queue.popleft()
        row: List[int] = []
        for sym in valuations:
            residual = deriver.derive(obligations[q], sym)
            key = skeleton.key(residual)
            target = index.get(key)
            if target is None:
                target = len(obligations)
                if target >= limits.max_dfa_states:
                    raise ResourceError(
                        "automaton states", limits.max_dfa_states, str(f)
                    )
                index[key] = target
                obligations.append(residual)
                if deriver.accepts(residual):
                    finals.add(target)
                queue.append(target)
            row.append(target)
        table.append(row)
    raw = Dfa(
        atoms=ap,
        support=support,
        table=tuple(tuple(row) for row in table),
        initial=0,
        finals=frozenset(finals),
    )
    result = minimize(raw)
    LOG.debug(
        "compiled %s: %s states, %s after minimization",
        f,
        raw.n_states,
        result.n_states,
    )
    return result


def minimize(d: Dfa) -> Dfa:
    """Return the minimal automaton of ``d``'s language.

    Unreachable states are dropped, equivalent states merged by Hopcroft's
    partition refinement and the result renumbered in breadth-first order
    from the initial state, visiting symbols in ascending order. Atoms the
    result does not depend on are removed from the support.
    """
    reach = _reachable(d)
    width = 1 << len(d.support)
    states = sorted(reach)
    finals = [q for q in states if q in d.finals]
    others = [q for q in states if q not in d.finals]
    blocks: List[Set[int]] = [set(b) for b in (finals, others) if b]
    block_of: Dict[int, int] = {}
    for i, block in enumerate(blocks):
        for q in block:
            block_of[q] = i

    inverse: List[Dict[int, List[int]]] = [{} for _ in range(width)]
    for q in states:
        row = d.table[q]
        for c in range(width):
            inverse[c].setdefault(row[c], []).append(q)

    work: Set[int] = set()
    if len(blocks) == 2:
        work.add(0 if len(blocks[0]) <= len(blocks[1]) else 1)
    while work:
        splitter = set(blocks[work.pop()])
        for c in range(width):
            hits: Set[int] = set()
            for target in splitter:
                hits.update(inverse[c].get(target, ()))
            if not hits:
                continue
            touched: Dict[int, Set[int]] = {}
            for q in hits:
                touched.setdefault(block_of[q], set()).add(q)
            for i, inside in touched.items():
                block = blocks[i]
                if len(inside) == len(block):
                    continue
                outside = block - inside
                blocks[i] = inside
                j = len(blocks)
                blocks.append(outside)
                for q in outside:
                    block_of[q] = j
                if i in work:
                    work.add(j)
                else:
                    work.add(i if len(inside) <= len(outside) else j)

    # canonical numbering
    order: Dict[int, int] = {block_of[d.initial]: 0}
    representative = [min(b) for b in blocks]
    queue: Deque[int] = collections.deque([block_of[d.initial]])
    rows: List[Tuple[int, ...]] = []
    new_finals: Set[int] = set()
    while queue:
        b = queue.popleft()
        rep = representative[b]
        if rep in d.finals:
            new_finals.add(order[b])
        row: List[int] = []
        for c in range(width):
            tb = block_of[d.table[rep][c]]
            if tb not in order:
                order[tb] = len(order)
                queue.append(tb)
            row.append(order[tb])
        rows.append(tuple(row))
    return _trim_support(
        Dfa(d.atoms, d.support, tuple(rows), 0, frozenset(new_finals))
    )


def _reachable(d: Dfa) -> Set[int]:
    seen = {d.initial}
    queue: Deque[int] = collections.deque([d.initial])
    while queue:
        q = queue.popleft()
        for t in d.table[q]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def _trim_support(d: Dfa) -> Dfa:
    support = list(d.support)
    table = [list(row) for row in d.table]
    j = 0
    while j < len(support):
        bit = 1 << j
        if all(row[c] == row[c | bit] for row in table for c in range(len(row)) if not c & bit):
            low = (1 << j) - 1
            table = [
                [row[(c & low) | ((c >> j) << (j + 1))] for c in range(len(row) // 2)]
                for row in table
            ]
            del support[j]
        else:
            j += 1
    if len(support) == len(d.support):
        return d
    return Dfa(d.atoms, tuple(support), tuple(tuple(r) for r in table), d.initial, d.finals)


def dfa_accepts(d: Dfa, trace: Sequence[AbstractSet[str]]) -> bool:
    """Run ``d`` over ``trace``; the empty trace is rejected.

    :raises UndeclaredAtomError: if a symbol mentions an atom outside ``d.atoms``
    """
    return d.is_final(d.run(trace))


def isomorphic(d1: Dfa, d2: Dfa) -> bool:
    """Decide whether two automata are equal up to state renaming."""
    if d1.n_states != d2.n_states:
        return False
    names = sorted(set(d1.support_names) | set(d2.support_names))
    valuations = _valuations(names)
    mapping = {d1.initial: d2.initial}
    queue: Deque[int] = collections.deque([d1.initial])
    while queue:
        p = queue.popleft()
        q = mapping[p]
        if d1.is_final(p) != d2.is_final(q):
            return False
        for sym in valuations:
            p2, q2 = d1.step(p, sym), d2.step(q, sym)
            seen = mapping.get(p2)
            if seen is None:
                if q2 in mapping.values():
                    return False
                mapping[p2] = q2
                queue.append(p2)
            elif seen != q2:
                return False
    return True


def edge_labels(d: Dfa, q: int) -> Dict[int, str]:
    """Describe the symbols leading from ``q`` to each successor as cubes."""
    names = d.support_names
    targets: Dict[int, int] = {}
    for c, t in enumerate(d.table[q]):
        targets[t] = targets.get(t, 0) | (1 << c)
    engine = Engine(names)
    labels: Dict[int, str] = {}
    for t, table in targets.items():
        f = engine.from_truth_table(names, table)
        labels[t] = describe_cubes(engine.cubes(f), names)
    return labels


def describe_cubes(cubes: Sequence[Dict[str, bool]], order: Sequence[str]) -> str:
    terms: List[str] = []
    for cube in cubes:
        literals = [name if cube[name] else f"!{name}" for name in order if name in cube]
        terms.append(" & ".join(literals) if literals else "true")
    return " | ".join(terms) if terms else "false"


def to_dot(d: Dfa, name: str = "dfa") -> str:
    """Render ``d`` in Graphviz DOT syntax, finals as double circles."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  init [shape=point];']
    for q in range(d.n_states):
        shape = "doublecircle" if d.is_final(q) else "circle"
        lines.append(f"  q{q} [shape={shape}];")
    lines.append(f"  init -> q{d.initial};")
    for q in range(d.n_states):
        for t, label in sorted(edge_labels(d, q).items()):
            lines.append(f'  q{q} -> q{t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
