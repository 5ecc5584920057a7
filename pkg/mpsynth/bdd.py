"""Reduced ordered binary decision diagrams.

An :class:`Engine` owns a fixed variable order, a unique table and an
``ite`` cache. Nodes are integers: ``0`` and ``1`` are the terminals and
every other node is a ``(level, low, high)`` triple stored once, so two
functions are equivalent iff they share a node id.

Functions are handed out as :class:`BoolFn` values bound to their engine::

    engine = Engine(["x", "y"])
    x, y = engine.var("x"), engine.var("y")
    f = engine.exists({"x"}, x & y)
    assert f == y

Each live :class:`BoolFn` holds a reference on its node. Nodes that no
handle reaches are reclaimed by :meth:`Engine.collect_garbage`, which also
runs on entry to quantification and composition once the table grows past
a threshold, and freed ids are reused.
"""
from __future__ import annotations

import collections.abc
import dataclasses
import logging
from typing import (
    AbstractSet,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from typing_extensions import Literal

from .exceptions import EngineError, ResourceError
from .types import EngineStats

LOG = logging.getLogger(__name__)

FALSE_ID = 0
TRUE_ID = 1
# level of the terminals, below every variable
_BOTTOM = 1 << 30
# level of a reclaimed slot
_FREED = -1
_GC_FLOOR = 1 << 16

Assignment = Dict[str, bool]
Bindings = Union[Mapping[str, "BoolFn"], Iterable[Tuple[str, "BoolFn"]]]


@dataclasses.dataclass(frozen=True, eq=False)
class BoolFn:
    """A Boolean function: a node id valid only in its owning engine."""

    engine: Engine
    node: int

    def __post_init__(self) -> None:
        self.engine._incref(self.node)

    def __del__(self) -> None:
        self.engine._decref(self.node)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoolFn):
            return NotImplemented
        return self.engine is other.engine and self.node == other.node

    def __hash__(self) -> int:
        return hash((id(self.engine), self.node))

    def __repr__(self) -> str:
        return f"BoolFn(node={self.node})"

    def __and__(self, other: BoolFn) -> BoolFn:
        return self.engine.apply("and", self, other)

    def __or__(self, other: BoolFn) -> BoolFn:
        return self.engine.apply("or", self, other)

    def __xor__(self, other: BoolFn) -> BoolFn:
        return self.engine.apply("xor", self, other)

    def __invert__(self) -> BoolFn:
        return self.engine.negate(self)

    def implies(self, other: BoolFn) -> BoolFn:
        return self.engine.apply("implies", self, other)

    @property
    def is_true(self) -> bool:
        return self.node == TRUE_ID

    @property
    def is_false(self) -> bool:
        return self.node == FALSE_ID


class Engine:
    """Canonical store for decision diagram nodes.

    :param variables: initial variable order, top first
    :param node_ceiling: abort with :class:`ResourceError` once the unique
        table holds this many live nodes; ``None`` for no ceiling
    """

    def __init__(
        self, variables: Iterable[str] = (), node_ceiling: Optional[int] = None
    ):
        self.node_ceiling = node_ceiling
        self._vars: List[str] = []
        self._level_of: Dict[str, int] = {}
        # node id -> (level, low, high); terminals at the bottom level
        self._level: List[int] = [_BOTTOM, _BOTTOM]
        self._low: List[int] = [FALSE_ID, TRUE_ID]
        self._high: List[int] = [FALSE_ID, TRUE_ID]
        self._unique: Dict[Tuple[int, int, int], int] = {}
        self._free: List[int] = []
        # node id -> number of live handles
        self._refs: Dict[int, int] = {}
        self._gc_at = _GC_FLOOR
        self._ite_cache: Dict[Tuple[int, int, int], int] = {}
        self._table_cache: Dict[Tuple[Tuple[str, ...], int], int] = {}
        self._lookups = 0
        self._hits = 0
        self.declare(*variables)

    def __repr__(self) -> str:
        return f"Engine(vars={len(self._vars)}, nodes={self.size})"

    # variables

    def declare(self, *names: str) -> None:
        """Append variables at the bottom of the order."""
        for name in names:
            if name in self._level_of:
                raise EngineError(f"variable already declared: {name}")
            self._level_of[name] = len(self._vars)
            self._vars.append(name)

    @property
    def variables(self) -> List[str]:
        return list(self._vars)

    def level_of(self, name: str) -> int:
        try:
            return self._level_of[name]
        except KeyError:
            raise EngineError(f"unknown variable: {name}") from None

    @property
    def true(self) -> BoolFn:
        return BoolFn(self, TRUE_ID)

    @property
    def false(self) -> BoolFn:
        return BoolFn(self, FALSE_ID)

    def constant(self, value: bool) -> BoolFn:
        return self.true if value else self.false

    def mk(self, kind: Union[str, bool]) -> BoolFn:
        """Return a constant (for ``True``/``False``) or a projection function."""
        if isinstance(kind, bool):
            return self.constant(kind)
        return self.var(kind)

    def var(self, name: str) -> BoolFn:
        return BoolFn(self, self._find_or_add(self.level_of(name), FALSE_ID, TRUE_ID))

    def literal(self, name: str, value: bool) -> BoolFn:
        f = self.var(name)
        return f if value else self.negate(f)

    def cube(self, assignment: Mapping[str, bool]) -> BoolFn:
        """Return the conjunction of the literals in ``assignment``."""
        r = TRUE_ID
        for name in sorted(assignment, key=self.level_of, reverse=True):
            level = self.level_of(name)
            if assignment[name]:
                r = self._find_or_add(level, FALSE_ID, r)
            else:
                r = self._find_or_add(level, r, FALSE_ID)
        return BoolFn(self, r)

    # nodes

    def _node(self, f: BoolFn) -> int:
        if f.engine is not self:
            raise EngineError("operand belongs to another engine")
        return f.node

    def _find_or_add(self, level: int, low: int, high: int) -> int:
        if low == high:
            return low
        key = (level, low, high)
        u = self._unique.get(key)
        if u is not None:
            return u
        if self.node_ceiling is not None and self.size >= self.node_ceiling:
            raise ResourceError("node ceiling", self.node_ceiling)
        if self._free:
            u = self._free.pop()
            self._level[u] = level
            self._low[u] = low
            self._high[u] = high
        else:
            u = len(self._level)
            self._level.append(level)
            self._low.append(low)
            self._high.append(high)
        self._unique[key] = u
        return u

    def _incref(self, u: int) -> None:
        self._refs[u] = self._refs.get(u, 0) + 1

    def _decref(self, u: int) -> None:
        n = self._refs.get(u, 0) - 1
        if n > 0:
            self._refs[u] = n
        else:
            self._refs.pop(u, None)

    def _cofactors(self, u: int, level: int) -> Tuple[int, int]:
        if self._level[u] != level:
            return u, u
        return self._low[u], self._high[u]

    # operators

    def _ite(self, f: int, g: int, h: int) -> int:
        if f == TRUE_ID:
            return g
        if f == FALSE_ID:
            return h
        if g == h:
            return g
        if g == TRUE_ID and h == FALSE_ID:
            return f
        key = (f, g, h)
        self._lookups += 1
        r = self._ite_cache.get(key)
        if r is not None:
            self._hits += 1
            return r
        z = min(self._level[f], self._level[g], self._level[h])
        f0, f1 = self._cofactors(f, z)
        g0, g1 = self._cofactors(g, z)
        h0, h1 = self._cofactors(h, z)
        p = self._ite(f0, g0, h0)
        q = self._ite(f1, g1, h1)
        r = self._find_or_add(z, p, q)
        self._ite_cache[key] = r
        return r

    def _not(self, u: int) -> int:
        return self._ite(u, FALSE_ID, TRUE_ID)

    def ite(self, f: BoolFn, g: BoolFn, h: BoolFn) -> BoolFn:
        return BoolFn(self, self._ite(self._node(f), self._node(g), self._node(h)))

    def negate(self, f: BoolFn) -> BoolFn:
        return BoolFn(self, self._not(self._node(f)))

    def apply(
        self,
        op: Literal["and", "or", "xor", "implies", "iff"],
        f: BoolFn,
        g: BoolFn,
    ) -> BoolFn:
        """Combine two functions of this engine with a binary operator."""
        u, v = self._node(f), self._node(g)
        if op == "and":
            r = self._ite(u, v, FALSE_ID)
        elif op == "or":
            r = self._ite(u, TRUE_ID, v)
        elif op == "xor":
            r = self._ite(u, self._not(v), v)
        elif op == "implies":
            r = self._ite(u, v, TRUE_ID)
        elif op == "iff":
            r = self._ite(u, v, self._not(v))
        else:
            raise EngineError(f"unknown operator: {op}")
        return BoolFn(self, r)

    def conjoin(self, fs: Iterable[BoolFn]) -> BoolFn:
        r = TRUE_ID
        for f in fs:
            r = self._ite(r, self._node(f), FALSE_ID)
        return BoolFn(self, r)

    def disjoin(self, fs: Iterable[BoolFn]) -> BoolFn:
        r = FALSE_ID
        for f in fs:
            r = self._ite(r, TRUE_ID, self._node(f))
        return BoolFn(self, r)

    def quantify(
        self,
        mode: Literal["exists", "forall"],
        names: AbstractSet[str],
        f: BoolFn,
    ) -> BoolFn:
        """Existentially or universally abstract ``names`` from ``f``."""
        if mode not in ("exists", "forall"):
            raise EngineError(f"unknown quantifier: {mode}")
        self._maybe_collect()
        levels = {self.level_of(v) for v in names}
        u = self._node(f)
        if not levels:
            return f
        deepest = max(levels)
        forall = mode == "forall"
        cache: Dict[int, int] = {}

        def go(u: int) -> int:
            level = self._level[u]
            if level > deepest:
                return u
            r = cache.get(u)
            if r is not None:
                return r
            p = go(self._low[u])
            q = go(self._high[u])
            if level in levels:
                r = self._ite(p, q, FALSE_ID) if forall else self._ite(p, TRUE_ID, q)
            else:
                r = self._find_or_add(level, p, q)
            cache[u] = r
            return r

        return BoolFn(self, go(u))

    def exists(self, names: AbstractSet[str], f: BoolFn) -> BoolFn:
        return self.quantify("exists", names, f)

    def forall(self, names: AbstractSet[str], f: BoolFn) -> BoolFn:
        return self.quantify("forall", names, f)

    def vector_compose(self, f: BoolFn, bindings: Bindings) -> BoolFn:
        """Substitute functions for variables in ``f``, all at once.

        :param f: function to substitute into
        :param bindings: pairs ``(variable, function)``; variables must be
            distinct
        :return: ``f`` with every bound variable replaced simultaneously
        """
        if isinstance(bindings, collections.abc.Mapping):
            pairs = list(bindings.items())
        else:
            pairs = list(bindings)
        self._maybe_collect()
        by_level: Dict[int, int] = {}
        for name, g in pairs:
            level = self.level_of(name)
            if level in by_level:
                raise EngineError(f"variable bound twice: {name}")
            by_level[level] = self._node(g)
        u = self._node(f)
        if not by_level:
            return f
        deepest = max(by_level)
        cache: Dict[int, int] = {}

        def go(u: int) -> int:
            level = self._level[u]
            if level > deepest:
                return u
            r = cache.get(u)
            if r is not None:
                return r
            p = go(self._low[u])
            q = go(self._high[u])
            g = by_level.get(level)
            if g is None:
                g = self._find_or_add(level, FALSE_ID, TRUE_ID)
            r = self._ite(g, q, p)
            cache[u] = r
            return r

        return BoolFn(self, go(u))

    def restrict(self, f: BoolFn, assignment: Mapping[str, bool]) -> BoolFn:
        """Fix variables to constants by composing with constant functions."""
        return self.vector_compose(
            f, [(name, self.constant(value)) for name, value in assignment.items()]
        )

    # queries

    def evaluate_fn(self, f: BoolFn, assignment: Mapping[str, bool]) -> bool:
        """Evaluate ``f`` by following one root-to-terminal path.

        :raises EngineError: if a variable on the path is unassigned
        """
        u = self._node(f)
        while u > TRUE_ID:
            name = self._vars[self._level[u]]
            try:
                value = assignment[name]
            except KeyError:
                raise EngineError(f"partial assignment: {name} unassigned") from None
            u = self._high[u] if value else self._low[u]
        return u == TRUE_ID

    def pick_assignment(
        self, f: BoolFn, over: Iterable[str]
    ) -> Optional[Assignment]:
        """Return one satisfying assignment restricted to ``over``.

        The path prefers low branches; variables of ``over`` that the path
        skips are set to ``False``. Returns ``None`` iff ``f`` is
        unsatisfiable.
        """
        u = self._node(f)
        if u == FALSE_ID:
            return None
        chosen: Assignment = {}
        while u > TRUE_ID:
            name = self._vars[self._level[u]]
            if self._low[u] != FALSE_ID:
                chosen[name] = False
                u = self._low[u]
            else:
                chosen[name] = True
                u = self._high[u]
        return {name: chosen.get(name, False) for name in over}

    def cubes(self, f: BoolFn) -> List[Assignment]:
        """Return the disjoint path cubes of ``f``, low branches first."""
        out: List[Assignment] = []

        def walk(u: int, path: Assignment) -> None:
            if u == FALSE_ID:
                return
            if u == TRUE_ID:
                out.append(dict(path))
                return
            name = self._vars[self._level[u]]
            path[name] = False
            walk(self._low[u], path)
            path[name] = True
            walk(self._high[u], path)
            del path[name]

        walk(self._node(f), {})
        return out

    def _reachable(self, u: int) -> Set[int]:
        seen: Set[int] = set()
        stack = [u]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            if v > TRUE_ID:
                stack.append(self._low[v])
                stack.append(self._high[v])
        return seen

    def support(self, f: BoolFn) -> List[str]:
        """Return the variables ``f`` depends on, in order."""
        levels = {self._level[v] for v in self._reachable(self._node(f)) if v > TRUE_ID}
        return [self._vars[level] for level in sorted(levels)]

    def node_count(self, f: BoolFn) -> int:
        """Count the nodes reachable from ``f``, terminals included."""
        return len(self._reachable(self._node(f)))

    def from_truth_table(self, names: Sequence[str], table: int) -> BoolFn:
        """Build the function whose value at index ``i`` is bit ``i`` of ``table``.

        Bit ``j`` of the index ``i`` is the value of ``names[j]``.
        """
        key = (tuple(names), table)
        hit = self._table_cache.get(key)
        if hit is not None:
            return BoolFn(self, hit)
        width = len(names)
        full = (1 << (1 << width)) - 1
        table &= full
        ordered = sorted(range(width), key=lambda j: self.level_of(names[j]))
        levels = [self.level_of(names[j]) for j in ordered]

        def build(k: int, index: int) -> int:
            if k == width:
                return TRUE_ID if table >> index & 1 else FALSE_ID
            bit = 1 << ordered[k]
            p = build(k + 1, index)
            q = build(k + 1, index | bit)
            return self._find_or_add(levels[k], p, q)

        if table == 0:
            r = FALSE_ID
        elif table == full:
            r = TRUE_ID
        else:
            r = build(0, 0)
        self._table_cache[key] = r
        return BoolFn(self, r)

    # housekeeping

    def clear_cache(self) -> None:
        LOG.debug("clearing %s cached ite results", len(self._ite_cache))
        self._ite_cache.clear()

    def collect_garbage(self) -> int:
        """Reclaim every node that no live :class:`BoolFn` reaches.

        Must not run while an operation holds bare node ids; the public
        operators call it only on entry. Clears the operation caches.

        :return: the number of nodes freed
        """
        marked = bytearray(len(self._level))
        marked[FALSE_ID] = marked[TRUE_ID] = 1
        stack = list(self._refs)
        while stack:
            u = stack.pop()
            if marked[u]:
                continue
            marked[u] = 1
            stack.append(self._low[u])
            stack.append(self._high[u])
        freed = 0
        for u in range(2, len(self._level)):
            level = self._level[u]
            if marked[u] or level == _FREED:
                continue
            del self._unique[(level, self._low[u], self._high[u])]
            self._level[u] = _FREED
            self._free.append(u)
            freed += 1
        self._ite_cache.clear()
        self._table_cache.clear()
        LOG.debug("collected %s dead nodes, %s live", freed, self.size)
        return freed

    def _maybe_collect(self) -> None:
        if self.size < self._gc_at:
            return
        self.collect_garbage()
        self._gc_at = max(_GC_FLOOR, 2 * self.size)
        if self.node_ceiling is not None:
            self._gc_at = max(_GC_FLOOR, min(self._gc_at, self.node_ceiling * 3 // 4))

    @property
    def size(self) -> int:
        """Number of live nodes in the unique table, terminals included."""
        return len(self._level) - len(self._free)

    def stats(self) -> EngineStats:
        return {
            "variables": len(self._vars),
            "nodes": self.size,
            "cache_entries": len(self._ite_cache),
            "cache_lookups": self._lookups,
            "cache_hits": self._hits,
        }

    def to_dot(self, roots: Mapping[str, BoolFn]) -> str:
        """Render the diagrams below ``roots`` in Graphviz DOT syntax.

        Dashed edges are low branches.
        """
        lines = ["digraph bdd {"]
        nodes: Set[int] = set()
        for name, f in roots.items():
            u = self._node(f)
            nodes |= self._reachable(u)
            lines.append(f'  "{name}" [shape=plaintext];')
            lines.append(f'  "{name}" -> n{u};')
        for u in sorted(nodes):
            if u <= TRUE_ID:
                lines.append(f'  n{u} [shape=box, label="{u}"];')
                continue
            lines.append(f'  n{u} [label="{self._vars[self._level[u]]}"];')
            lines.append(f"  n{u} -> n{self._low[u]} [style=dashed];")
            lines.append(f"  n{u} -> n{self._high[u]};")
        lines.append("}")
        return "\n".join(lines) + "\n"
