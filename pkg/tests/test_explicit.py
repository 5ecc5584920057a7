import random

import pytest

from mpsynth import explicit
from mpsynth.config import Limits
from mpsynth.exceptions import DeadlineExceeded, ResourceError, UnrealizableError
from mpsynth.harness import verify_exhaustive
from mpsynth.types import RelationDoc, TransducerDoc
from mpsynth.utils import Deadline, antichain, is_subset, submasks

from conftest import S_12, S_23, S_ALL, make_random_arena
from utils import validate

G12, G23, G13, G123 = 0b011, 0b110, 0b101, 0b111


class TestPreC:
    def test_triad(self, triad):
        s_all = triad.index_of(S_ALL)
        assert explicit.pre_c(triad, {s_all}) == {s_all}
        targets = {triad.index_of(S_12), s_all}
        assert triad.initial in explicit.pre_c(triad, targets)

    def test_solve_single_unrealizable(self, triad):
        solution = explicit.solve_single(triad)
        assert not solution.realizable
        assert solution.rank[triad.index_of(S_ALL)] == 0

    def test_solve_single_move(self, triad):
        target = {triad.index_of(S_23)}
        solution = explicit.solve_single(triad, target)
        assert solution.realizable
        assert solution.rank[triad.initial] == 1
        assert solution.move[triad.initial] == 0b10

    def test_solve_single_deadline(self, triad):
        with pytest.raises(DeadlineExceeded):
            explicit.solve_single(triad, deadline=Deadline(-1.0))


class TestWinM:
    def test_triad(self, triad):
        w = explicit.win_m(triad)
        s0 = triad.initial
        assert (s0, G12) in w
        assert (s0, G23) in w
        assert (s0, G13) not in w
        assert (s0, G123) not in w
        assert w.rank(s0, G12) == 1
        assert w.rank(s0, 0) == 0
        assert w.rank(triad.index_of(S_12), G12) == 0

    def test_downward_closed(self, triad):
        w = explicit.win_m(triad)
        for s, c in w.pairs():
            for d in submasks(c):
                assert (s, d) in w

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_batched_iteration(self, random_arena, seed):
        a = random_arena(seed)
        assert explicit.win_m(a) == explicit.win_m_batched(a)

    @pytest.mark.parametrize("seed", range(100))
    def test_matches_oracle(self, random_arena, seed):
        a = random_arena(seed)
        w = explicit.win_m(a)
        horizon = a.n_states
        for c in range(1 << a.n_goals):
            assert ((a.initial, c) in w) == explicit.oracle_realizable(a, c, horizon)

    @pytest.mark.parametrize("seed", range(10))
    def test_rank_is_least_horizon(self, random_arena, seed):
        a = random_arena(seed)
        w = explicit.win_m(a)
        for c in w.sets(a.initial):
            r = w.rank(a.initial, c)
            assert explicit.oracle_realizable(a, c, r)
            if r > 0:
                assert not explicit.oracle_realizable(a, c, r - 1)

    @pytest.mark.parametrize("seed", range(50))
    def test_single_goal_ranks(self, seed):
        a = make_random_arena(seed, max_goals=1)
        w = explicit.win_m(a)
        solution = explicit.solve_single(a)
        for s in range(a.n_states):
            assert w.rank(s, 0b1) == solution.rank.get(s)

    def test_fixed_point(self, triad):
        w = explicit.win_m(triad).pairs()
        assert explicit.pre_mc(triad, w) | explicit.initial_relation(triad) == w

    def test_goal_limit(self, triad):
        with pytest.raises(ResourceError):
            explicit.win_m(triad, Limits(max_explicit_goals=2))


class TestWinMM:
    def test_triad(self, triad):
        m = explicit.win_mm(triad)
        assert m[triad.initial] == (G12, G23)
        assert m[triad.index_of(S_ALL)] == (G123,)

    def test_max_op(self, triad):
        assert explicit.max_op(explicit.win_m(triad).pairs())[triad.initial] == (G12, G23)

    @pytest.mark.parametrize("seed", range(50))
    def test_closure_is_win_m(self, random_arena, seed):
        a = random_arena(seed)
        m = explicit.win_mm(a)
        assert explicit.downward_close(m) == explicit.win_m(a).pairs()

    @pytest.mark.parametrize("seed", range(50))
    def test_antichain(self, random_arena, seed):
        a = random_arena(seed)
        for sets in explicit.win_mm(a).values():
            assert sorted(antichain(sets)) == list(sets)

    def test_pre_mmc_contains_pre_mc(self, triad):
        m = explicit.win_mm(triad)
        closed = explicit.downward_close(m)
        assert explicit.pre_mc(triad, closed) <= explicit.pre_mmc(triad, m)


def random_relation(a, rng):
    """A random downward-closed pair set over ``a``."""
    stored = {
        s: [rng.randrange(1 << a.n_goals) for _ in range(rng.randint(0, 2))]
        for s in range(a.n_states)
    }
    return explicit.downward_close(stored)


class TestPredecessors:
    @pytest.mark.parametrize("seed", range(50))
    def test_pre_mc_monotone(self, random_arena, seed):
        a = random_arena(seed)
        rng = random.Random(seed)
        big = random_relation(a, rng)
        small = frozenset(p for p in big if rng.random() < 0.5)
        assert explicit.pre_mc(a, small) <= explicit.pre_mc(a, big)

    @pytest.mark.parametrize("seed", range(50))
    def test_closure_undoes_max(self, random_arena, seed):
        a = random_arena(seed)
        w = random_relation(a, random.Random(seed))
        assert explicit.downward_close(explicit.max_op(w)) == w

    @pytest.mark.parametrize("seed", range(50))
    def test_pre_mmc_of_max_is_pre_mc(self, random_arena, seed):
        a = random_arena(seed)
        w = random_relation(a, random.Random(seed))
        assert explicit.pre_mmc(a, explicit.max_op(w)) == explicit.pre_mc(a, w)


class TestExtractStrategy:
    def test_triad_first_pair(self, triad):
        t = explicit.extract_strategy(triad, explicit.win_m(triad), G12)
        assert t.n_states == 3
        assert t.output(0) == 0b01
        assert t.states[0].next == (1, 2, 1, 2)
        assert t.states[1].done and t.states[2].done

    def test_triad_second_pair(self, triad):
        t = explicit.extract_strategy(triad, explicit.win_m(triad), G23)
        assert t.output(0) == 0b10
        assert t.states[0].next == (1, 1, 1, 1)
        assert t.states[1].origin == triad.index_of(S_23)

    def test_least_output(self, triad):
        # every non-idle output reaches a state satisfying g2, y2 is least
        t = explicit.extract_strategy(triad, explicit.win_m(triad), 0b010)
        assert t.output(0) == 0b10

    def test_empty_goal_set_is_done(self, triad):
        t = explicit.extract_strategy(triad, explicit.win_m(triad), 0)
        assert t.n_states == 1
        assert t.states[0].done

    def test_unrealizable(self, triad):
        with pytest.raises(UnrealizableError) as exc_info:
            explicit.extract_strategy(triad, explicit.win_m(triad), G13)
        assert exc_info.value.labels == ("g1", "g3")
        assert exc_info.value.exit_code == 1

    @pytest.mark.parametrize("seed", range(20))
    def test_strategies_win(self, random_arena, seed):
        a = random_arena(seed)
        w = explicit.win_m(a)
        for c in w.sets(a.initial):
            t = explicit.extract_strategy(a, w, c)
            assert verify_exhaustive(a, t, c, depth=a.n_states + 1) is True
            for state in t.states:
                if state.done:
                    assert is_subset(c, a.sat[state.origin])

    def test_doc(self, triad):
        t = explicit.extract_strategy(triad, explicit.win_m(triad), G12)
        doc = validate(TransducerDoc, t.to_doc())
        assert doc["states"][0]["output"] == {"y1": True, "y2": False}
        assert doc["states"][0]["next"] == {"": 1, "x2": 1, "x1": 2, "x1,x2": 2}


class TestOracle:
    def test_triad(self, triad):
        assert explicit.oracle_realizable(triad, G23, 2)
        assert not explicit.oracle_realizable(triad, G13, 4)
        assert not explicit.oracle_realizable(triad, G12, 0)


class TestDumpRelation:
    def test_full(self, triad):
        doc = validate(RelationDoc, explicit.dump_relation(triad, explicit.win_m(triad)))
        assert doc["kind"] == "full"
        assert doc["goals"] == ["g1", "g2", "g3"]
        initial = doc["states"][0]
        assert initial["components"] == [0, 0, 0]
        assert {"goals": ["g1", "g2"], "rank": 1} in initial["sets"]
        assert {"goals": [], "rank": 0} == initial["sets"][0]

    def test_maximal(self, triad):
        doc = validate(RelationDoc, explicit.dump_relation(triad, explicit.win_mm(triad)))
        assert doc["kind"] == "maximal"
        assert doc["states"][0]["sets"] == [{"goals": ["g1", "g2"]}, {"goals": ["g2", "g3"]}]
