"""LTLf formulas: interned syntax trees, desugaring, printing and evaluation.

Formulas are hash-consed: structurally equal formulas built through the
constructors of this module are the same object, so identity comparison is
structural equality. Constructors normalize as they build (flattened, sorted
and deduplicated conjunctions and disjunctions, constant folding, double
negation) without changing the set of suffixes, including the empty one,
that satisfy a formula.
"""
from __future__ import annotations

import enum
import threading
import weakref
from typing import (
    AbstractSet,
    Any,
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
)

Trace = Sequence[AbstractSet[str]]


class Op(enum.Enum):
    TRUE = 0
    FALSE = 1
    ATOM = 2
    NOT = 3
    AND = 4
    OR = 5
    IMPLIES = 6
    IFF = 7
    NEXT = 8
    WEAK_NEXT = 9
    UNTIL = 10
    RELEASE = 11
    EVENTUALLY = 12
    ALWAYS = 13


#: operators left after :func:`desugar`
CORE_OPS = frozenset(
    {
        Op.TRUE,
        Op.FALSE,
        Op.ATOM,
        Op.NOT,
        Op.AND,
        Op.OR,
        Op.NEXT,
        Op.WEAK_NEXT,
        Op.UNTIL,
    }
)

_lock = threading.Lock()
_table: "weakref.WeakValueDictionary[Tuple[Any, ...], Formula]" = (
    weakref.WeakValueDictionary()
)


class Formula:
    """Immutable LTLf syntax tree node.

    Do not instantiate directly; use the constructor functions
    (:func:`atom`, :func:`conj`, :func:`until`, ...) or
    :func:`mpsynth.parser.parse_formula`.
    """

    __slots__ = ("op", "name", "args", "_key", "__weakref__")

    op: Op
    name: str
    args: Tuple[Formula, ...]

    def __init__(self, op: Op, name: str, args: Tuple[Formula, ...]):
        self.op = op
        self.name = name
        self.args = args
        self._key: Optional[Tuple[Any, ...]] = None

    def __setattr__(self, key: str, value: Any) -> None:
        if key != "_key" and hasattr(self, key):
            raise AttributeError("formulas are immutable")
        object.__setattr__(self, key, value)

    def __reduce__(self) -> Tuple[Callable[..., Formula], Tuple[Any, ...]]:
        return _make, (self.op, self.name, self.args)

    def __repr__(self) -> str:
        return f"Formula({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    @property
    def sort_key(self) -> Tuple[Any, ...]:
        """Structural ordering key, stable across processes."""
        if self._key is None:
            self._key = (
                self.op.value,
                self.name,
                tuple(a.sort_key for a in self.args),
            )
        return self._key

    @property
    def is_core(self) -> bool:
        return self.op in CORE_OPS and all(a.is_core for a in self.args)


def _make(op: Op, name: str = "", args: Tuple[Formula, ...] = ()) -> Formula:
    key = (op, name, args)
    with _lock:
        found = _table.get(key)
        if found is None:
            found = Formula(op, name, args)
            _table[key] = found
        return found


TRUE = _make(Op.TRUE)
FALSE = _make(Op.FALSE)


def atom(name: str) -> Formula:
    return _make(Op.ATOM, name)


def neg(f: Formula) -> Formula:
    if f is TRUE:
        return FALSE
    if f is FALSE:
        return TRUE
    if f.op is Op.NOT:
        return f.args[0]
    return _make(Op.NOT, "", (f,))


def _junction(op: Op, unit: Formula, zero: Formula, fs: Iterable[Formula]) -> Formula:
    flat: Dict[int, Formula] = {}
    stack = list(fs)
    stack.reverse()
    while stack:
        f = stack.pop()
        if f is zero:
            return zero
        if f is unit:
            continue
        if f.op is op:
            stack.extend(reversed(f.args))
            continue
        flat[id(f)] = f
    for f in flat.values():
        if f.op is Op.NOT and id(f.args[0]) in flat:
            return zero
    if not flat:
        return unit
    if len(flat) == 1:
        return next(iter(flat.values()))
    ordered = tuple(sorted(flat.values(), key=lambda f: f.sort_key))
    return _make(op, "", ordered)


def conj(*fs: Formula) -> Formula:
    return _junction(Op.AND, TRUE, FALSE, fs)


def disj(*fs: Formula) -> Formula:
    return _junction(Op.OR, FALSE, TRUE, fs)


def implies(a: Formula, b: Formula) -> Formula:
    return _make(Op.IMPLIES, "", (a, b))


def iff(a: Formula, b: Formula) -> Formula:
    return _make(Op.IFF, "", (a, b))


def next_(f: Formula) -> Formula:
    if f is FALSE:
        return FALSE
    return _make(Op.NEXT, "", (f,))


def weak_next(f: Formula) -> Formula:
    if f is TRUE:
        return TRUE
    return _make(Op.WEAK_NEXT, "", (f,))


def until(a: Formula, b: Formula) -> Formula:
    if b is FALSE:
        return FALSE
    return _make(Op.UNTIL, "", (a, b))


def release(a: Formula, b: Formula) -> Formula:
    return _make(Op.RELEASE, "", (a, b))


def eventually(f: Formula) -> Formula:
    return _make(Op.EVENTUALLY, "", (f,))


def always(f: Formula) -> Formula:
    return _make(Op.ALWAYS, "", (f,))


def atoms(f: Formula) -> FrozenSet[str]:
    """Return the atom names occurring in ``f``."""
    found: Set[str] = set()
    seen: Set[int] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        if g.op is Op.ATOM:
            found.add(g.name)
        stack.extend(g.args)
    return frozenset(found)


def desugar(f: Formula) -> Formula:
    """Rewrite ``f`` over the core operators.

    ``F φ`` becomes ``true U φ``, ``G φ`` becomes ``!(true U !φ)``,
    ``φ R ψ`` becomes ``!(!φ U !ψ)``; implications and equivalences are
    expanded. Weak next is kept as the dual of next.
    """
    cache: Dict[int, Formula] = {}

    def go(g: Formula) -> Formula:
        done = cache.get(id(g))
        if done is not None:
            return done
        op = g.op
        args = [go(a) for a in g.args]
        if op in (Op.TRUE, Op.FALSE, Op.ATOM):
            out = g
        elif op is Op.NOT:
            out = neg(args[0])
        elif op is Op.AND:
            out = conj(*args)
        elif op is Op.OR:
            out = disj(*args)
        elif op is Op.IMPLIES:
            out = disj(neg(args[0]), args[1])
        elif op is Op.IFF:
            a, b = args
            out = disj(conj(a, b), conj(neg(a), neg(b)))
        elif op is Op.NEXT:
            out = next_(args[0])
        elif op is Op.WEAK_NEXT:
            out = weak_next(args[0])
        elif op is Op.UNTIL:
            out = until(args[0], args[1])
        elif op is Op.RELEASE:
            out = neg(until(neg(args[0]), neg(args[1])))
        elif op is Op.EVENTUALLY:
            out = until(TRUE, args[0])
        else:
            out = neg(until(TRUE, neg(args[0])))
        cache[id(g)] = out
        return out

    return go(f)


_UNARY = {
    Op.NOT: "!",
    Op.NEXT: "X ",
    Op.WEAK_NEXT: "WX ",
    Op.EVENTUALLY: "F ",
    Op.ALWAYS: "G ",
}

_BINARY = {
    Op.AND: " & ",
    Op.OR: " | ",
    Op.IMPLIES: " -> ",
    Op.IFF: " <-> ",
    Op.UNTIL: " U ",
    Op.RELEASE: " R ",
}


def to_text(f: Formula) -> str:
    """Print ``f`` fully parenthesized in the input syntax."""
    if f.op is Op.TRUE:
        return "true"
    if f.op is Op.FALSE:
        return "false"
    if f.op is Op.ATOM:
        return f.name
    if f.op in _UNARY:
        return f"({_UNARY[f.op]}{to_text(f.args[0])})"
    return "(" + _BINARY[f.op].join(to_text(a) for a in f.args) + ")"


def evaluate(trace: Trace, f: Formula, pos: int = 0) -> bool:
    """Decide whether ``trace`` satisfies ``f`` at position ``pos``.

    The empty trace satisfies no formula.

    :param trace: sequence of sets of true atoms
    :param f: formula over any operators
    :param pos: position, ``0 <= pos < len(trace)``
    :return: ``True`` iff the suffix from ``pos`` satisfies ``f``
    :raises IndexError: if ``pos`` is out of range for a non-empty trace
    """
    n = len(trace)
    if n == 0 and pos == 0:
        return False
    if not 0 <= pos < n:
        raise IndexError(f"position {pos} outside trace of length {n}")
    memo: Dict[Tuple[int, int], bool] = {}

    def sat(g: Formula, i: int) -> bool:
        key = (id(g), i)
        hit = memo.get(key)
        if hit is not None:
            return hit
        op = g.op
        if op is Op.TRUE:
            r = True
        elif op is Op.FALSE:
            r = False
        elif op is Op.ATOM:
            r = g.name in trace[i]
        elif op is Op.NOT:
            r = not sat(g.args[0], i)
        elif op is Op.AND:
            r = all(sat(a, i) for a in g.args)
        elif op is Op.OR:
            r = any(sat(a, i) for a in g.args)
        elif op is Op.IMPLIES:
            r = not sat(g.args[0], i) or sat(g.args[1], i)
        elif op is Op.IFF:
            r = sat(g.args[0], i) == sat(g.args[1], i)
        elif op is Op.NEXT:
            r = i + 1 < n and sat(g.args[0], i + 1)
        elif op is Op.WEAK_NEXT:
            r = i + 1 >= n or sat(g.args[0], i + 1)
        elif op is Op.UNTIL:
            r = False
            for j in range(i, n):
                if sat(g.args[1], j):
                    r = True
                    break
                if not sat(g.args[0], j):
                    break
        elif op is Op.RELEASE:
            r = True
            for j in range(i, n):
                if not sat(g.args[1], j):
                    r = False
                    break
                if sat(g.args[0], j):
                    break
        elif op is Op.EVENTUALLY:
            r = any(sat(g.args[0], j) for j in range(i, n))
        else:
            r = all(sat(g.args[0], j) for j in range(i, n))
        memo[key] = r
        return r

    return sat(f, pos)


def satisfied_goals(trace: Trace, formulas: Sequence[Formula]) -> List[int]:
    """Return the indices of the formulas the whole trace satisfies."""
    return [i for i, f in enumerate(formulas) if evaluate(trace, f, 0)]
