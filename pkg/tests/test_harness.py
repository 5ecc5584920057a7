import pytest

from mpsynth.config import Limits
from mpsynth.exceptions import ResourceError
from mpsynth.harness import EnvPolicy, behaviorally_equal, format_trace, simulate, verify_exhaustive
from mpsynth.pipeline import Synthesizer
from mpsynth.transducer import Transducer, TransducerState

from conftest import TRIAD_ALPHABET

G12 = 0b011


@pytest.fixture
def strategy(triad_spec):
    _, t = Synthesizer().synthesize(triad_spec, ["g1", "g2"])
    return t


@pytest.fixture
def wrong_strategy():
    # plays y2 first, which can never satisfy g1
    return Transducer(TRIAD_ALPHABET, [TransducerState(0b10, (1, 1, 1, 1)), TransducerState(None)])


class TestSimulate:
    def test_random(self, triad_spec, strategy):
        for seed in range(5):
            result = simulate(triad_spec, strategy, EnvPolicy.random(seed), 10, G12)
            assert result.verdict == "satisfied"
            assert result.goals & G12 == G12
            assert result.rounds == 1

    def test_scripted(self, triad_spec, strategy):
        result = simulate(triad_spec, strategy, EnvPolicy.scripted([{"x1"}]), 10)
        assert result.trace == [frozenset({"y1", "x1"})]
        assert result.goal_labels == ["g1", "g2", "g3"]
        result = simulate(triad_spec, strategy, EnvPolicy.scripted([set()]), 10)
        assert result.goal_labels == ["g1", "g2"]

    def test_arena_judge_agrees(self, triad, triad_spec, strategy):
        env = EnvPolicy.scripted([{"x2"}])
        by_spec = simulate(triad_spec, strategy, env, 10)
        by_arena = simulate(triad, strategy, env, 10)
        assert by_spec.goals == by_arena.goals

    def test_script_exhausted(self, triad_spec, strategy):
        result = simulate(triad_spec, strategy, EnvPolicy.scripted([]), 10)
        assert result.verdict == "budget-exceeded"

    def test_budget(self, triad_spec, strategy):
        assert simulate(triad_spec, strategy, EnvPolicy.random(), 0).verdict == "budget-exceeded"

    def test_vacuous(self, triad_spec):
        _, t = Synthesizer().synthesize(triad_spec, [])
        assert t.n_states == 1
        assert simulate(triad_spec, t, EnvPolicy.random(), 5).verdict == "vacuous"
        assert simulate(triad_spec, t, EnvPolicy.random(), 5, 0b001).verdict == "strategy-error"

    def test_claim_not_met(self, triad_spec, wrong_strategy):
        result = simulate(triad_spec, wrong_strategy, EnvPolicy.random(), 5, G12)
        assert result.verdict == "strategy-error"

    def test_exhaustive_policy_rejected(self, triad_spec, strategy):
        with pytest.raises(ValueError):
            simulate(triad_spec, strategy, EnvPolicy.exhaustive(3), 5)

    def test_format_trace(self, triad_spec, strategy):
        result = simulate(triad_spec, strategy, EnvPolicy.scripted([{"x1"}]), 10)
        assert format_trace(result) == (
            "round 0: Y={y1} X={x1} state=0\nsatisfied: {g1,g2,g3} after 1 rounds\n"
        )


class TestVerifyExhaustive:
    def test_winning(self, triad_spec, strategy):
        assert verify_exhaustive(triad_spec, strategy, G12, 3) is True

    def test_counterexample(self, triad_spec, wrong_strategy):
        assert verify_exhaustive(triad_spec, wrong_strategy, G12, 3) == [frozenset()]

    def test_depth_too_small(self, triad, triad_spec):
        looping = Transducer(TRIAD_ALPHABET, [TransducerState(0, (0, 0, 0, 0))])
        assert verify_exhaustive(triad, looping, G12, 2) == [frozenset(), frozenset()]
        with pytest.raises(ValueError):
            verify_exhaustive(triad_spec, looping, G12, 0)

    def test_round_budget(self, triad_spec):
        looping = Transducer(TRIAD_ALPHABET, [TransducerState(0, (0, 0, 0, 0))])
        with pytest.raises(ResourceError) as exc_info:
            verify_exhaustive(triad_spec, looping, G12, 10, Limits(max_exhaustive_rounds=3))
        assert exc_info.value.limit == "exhaustive rounds"


class TestBehaviorallyEqual:
    def test_solvers_agree(self, triad_spec, strategy):
        _, other = Synthesizer().synthesize(triad_spec, ["g1", "g2"], solver="explicit")
        assert behaviorally_equal(strategy, other, 5)

    def test_different(self, strategy, wrong_strategy):
        assert not behaviorally_equal(strategy, wrong_strategy, 5)
