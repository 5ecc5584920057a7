import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mpsynth import bdd
from mpsynth.bdd import Engine
from mpsynth.exceptions import EngineError, ResourceError

NAMES = ["a", "b", "c"]


@pytest.fixture
def engine():
    return Engine(NAMES)


def assignments(names):
    for values in itertools.product([False, True], repeat=len(names)):
        yield dict(zip(names, values))


def truth_table(engine, f, names=NAMES):
    table = 0
    for i in range(1 << len(names)):
        env = {n: bool(i >> j & 1) for j, n in enumerate(names)}
        if engine.evaluate_fn(f, env):
            table |= 1 << i
    return table


class TestConstruction:
    def test_mk(self, engine):
        assert engine.mk(True) == engine.true
        assert engine.mk(False) == engine.false
        assert engine.mk("a") == engine.var("a")
        assert engine.mk("a").node not in (0, 1)

    def test_literal(self, engine):
        assert engine.literal("b", False) == ~engine.var("b")

    def test_cube(self, engine):
        f = engine.cube({"a": True, "c": False})
        assert f == engine.var("a") & ~engine.var("c")
        assert engine.cube({}) == engine.true

    def test_declare_twice(self, engine):
        with pytest.raises(EngineError):
            engine.declare("a")

    def test_unknown_variable(self, engine):
        with pytest.raises(EngineError):
            engine.var("z")

    def test_foreign_operand(self, engine):
        other = Engine(NAMES)
        with pytest.raises(EngineError):
            engine.var("a") & other.var("a")

    def test_variables_in_order(self):
        e = Engine(["z", "a"])
        e.declare("m")
        assert e.variables == ["z", "a", "m"]
        assert e.level_of("m") == 2


class TestApply:
    @pytest.mark.parametrize(
        "op,expected",
        [
            ("and", lambda p, q: p and q),
            ("or", lambda p, q: p or q),
            ("xor", lambda p, q: p != q),
            ("implies", lambda p, q: not p or q),
            ("iff", lambda p, q: p == q),
        ],
    )
    def test_operators(self, engine, op, expected):
        f = engine.apply(op, engine.var("a"), engine.var("b"))
        for env in assignments(["a", "b"]):
            assert engine.evaluate_fn(f, env) == expected(env["a"], env["b"])

    def test_unknown_operator(self, engine):
        with pytest.raises(EngineError):
            engine.apply("nand", engine.true, engine.true)  # type: ignore[arg-type]

    def test_tautology_is_true_node(self, engine):
        a = engine.var("a")
        assert (a | ~a).is_true
        assert (a & ~a).is_false

    def test_ite(self, engine):
        a, b, c = (engine.var(n) for n in NAMES)
        assert engine.ite(a, b, c) == (a & b) | (~a & c)

    def test_conjoin_disjoin(self, engine):
        a, b, c = (engine.var(n) for n in NAMES)
        assert engine.conjoin([a, b, c]) == a & b & c
        assert engine.disjoin([]) == engine.false
        assert engine.conjoin([]) == engine.true

    def test_implies(self, engine):
        a, b = engine.var("a"), engine.var("b")
        assert a.implies(b) == ~a | b


class TestQuantify:
    def test_exists(self, engine):
        a, b = engine.var("a"), engine.var("b")
        assert engine.exists({"a"}, a & b) == b
        assert engine.exists({"a", "b"}, a & b).is_true

    def test_forall(self, engine):
        a, b = engine.var("a"), engine.var("b")
        assert engine.forall({"a"}, a | b) == b
        assert engine.forall({"a"}, a & b).is_false

    def test_duality(self, engine):
        a, b, c = (engine.var(n) for n in NAMES)
        f = (a & ~b) | (b & c)
        assert engine.forall({"b"}, f) == ~engine.exists({"b"}, ~f)

    def test_empty_set(self, engine):
        a = engine.var("a")
        assert engine.exists(set(), a) == a

    def test_unknown_mode(self, engine):
        with pytest.raises(EngineError):
            engine.quantify("some", {"a"}, engine.true)  # type: ignore[arg-type]


class TestSubstitution:
    def test_simultaneous_swap(self, engine):
        a, b = engine.var("a"), engine.var("b")
        f = a & ~b
        assert engine.vector_compose(f, {"a": b, "b": a}) == b & ~a

    def test_bound_twice(self, engine):
        with pytest.raises(EngineError):
            engine.vector_compose(engine.true, [("a", engine.true), ("a", engine.false)])

    def test_restrict(self, engine):
        a, b, c = (engine.var(n) for n in NAMES)
        f = (a & b) | c
        assert engine.restrict(f, {"a": True}) == b | c
        assert engine.restrict(f, {"c": False, "b": False}).is_false


class TestQueries:
    def test_evaluate_partial(self, engine):
        with pytest.raises(EngineError):
            engine.evaluate_fn(engine.var("a"), {})

    def test_evaluate_skips_unused(self, engine):
        assert engine.evaluate_fn(engine.var("a"), {"a": True})

    def test_pick_prefers_false(self, engine):
        a, b = engine.var("a"), engine.var("b")
        assert engine.pick_assignment(a | b, NAMES) == {"a": False, "b": True, "c": False}
        assert engine.pick_assignment(engine.false, NAMES) is None

    def test_cubes(self, engine):
        a, b = engine.var("a"), engine.var("b")
        assert engine.cubes(a ^ b) == [{"a": False, "b": True}, {"a": True, "b": False}]
        assert engine.cubes(engine.true) == [{}]
        assert engine.cubes(engine.false) == []

    def test_support_and_count(self, engine):
        a, c = engine.var("a"), engine.var("c")
        f = a & c
        assert engine.support(f) == ["a", "c"]
        assert engine.node_count(f) == 4

    def test_from_truth_table(self, engine):
        assert engine.from_truth_table(["a", "b"], 0b1000) == engine.var("a") & engine.var("b")
        # bit j of the index is names[j], regardless of the order
        assert engine.from_truth_table(["c", "a"], 0b0010) == engine.var("c") & ~engine.var("a")

    def test_stats(self, engine):
        engine.var("a") & engine.var("b")
        stats = engine.stats()
        assert stats["variables"] == 3
        assert stats["nodes"] == engine.size
        engine.clear_cache()
        assert engine.stats()["cache_entries"] == 0

    def test_to_dot(self, engine):
        dot = engine.to_dot({"w": engine.var("a")})
        assert '"w" -> n2;' in dot
        assert 'n2 [label="a"];' in dot
        assert "n2 -> n0 [style=dashed];" in dot


class TestGarbage:
    def test_collect_frees_dropped_functions(self, engine):
        keep = engine.var("a") & engine.var("b")
        engine.var("b") | engine.var("c")
        before = engine.size
        freed = engine.collect_garbage()
        assert freed >= 2
        assert engine.size == before - freed
        assert truth_table(engine, keep) == (1 << 3) | (1 << 7)

    def test_freed_slots_are_reused(self, engine):
        engine.var("b") | engine.var("c")
        engine.collect_garbage()
        slots = len(engine._level)
        f = engine.var("b") | engine.var("c")
        assert len(engine._level) == slots
        assert truth_table(engine, f) == 0b11111100

    def test_ceiling_counts_live_nodes(self, monkeypatch):
        monkeypatch.setattr(bdd, "_GC_FLOOR", 4)
        e = Engine(NAMES, node_ceiling=40)
        for table in range(256):
            f = e.from_truth_table(NAMES, table)
            g = e.exists({"a"}, f)
            either = e.restrict(f, {"a": False}) | e.restrict(f, {"a": True})
            assert g == either
            del f, g, either
        assert e.size <= 40


def test_node_ceiling():
    e = Engine(NAMES, node_ceiling=3)
    e.var("a")
    with pytest.raises(ResourceError) as exc_info:
        e.var("b")
    assert exc_info.value.limit == "node ceiling"


_tables = st.integers(min_value=0, max_value=(1 << 8) - 1)


@given(_tables, _tables)
def test_canonical(t1, t2):
    e = Engine(NAMES)
    f, g = e.from_truth_table(NAMES, t1), e.from_truth_table(NAMES, t2)
    assert (f == g) == (t1 == t2)
    assert truth_table(e, f & g) == t1 & t2
    assert truth_table(e, f | g) == t1 | t2
    assert truth_table(e, ~f) == ~t1 & 0xFF


@given(_tables, st.permutations(NAMES))
def test_truth_table_independent_of_name_order(table, names):
    e = Engine(NAMES)
    f = e.from_truth_table(NAMES, table)
    assert e.from_truth_table(names, truth_table(e, f, names)) == f
