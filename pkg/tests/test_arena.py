import random

import pytest

from mpsynth import arena as arena_mod
from mpsynth.alphabet import Alphabet, lexicographic, project, reverse_bits
from mpsynth.arena import build_product, sat_goals
from mpsynth.config import Limits
from mpsynth.dfa import build_dfa
from mpsynth.exceptions import PartitionError, ResourceError, SpecError, UndeclaredAtomError
from mpsynth.parser import parse_formula

from conftest import TRIAD_ALPHABET, S_12, S_23, S_ALL


class TestAlphabet:
    def test_symbol_packing(self):
        a = Alphabet(["x1", "x2"], ["y1"])
        assert a.symbol(0b01, 0b1) == 0b101
        assert a.split(0b101) == (0b01, 0b1)
        assert a.decode(0b101) == {"x1", "y1"}
        assert a.encode({"x2", "y1"}) == 0b110

    def test_partition(self):
        with pytest.raises(PartitionError):
            Alphabet(["x"], ["x"])

    def test_lexicographic_order(self):
        # first variable most significant, false before true
        assert list(lexicographic(2)) == [0b00, 0b10, 0b01, 0b11]
        assert reverse_bits(0b001, 3) == 0b100

    def test_input_keys(self):
        a = TRIAD_ALPHABET
        assert [a.input_key(x) for x in a.inputs_in_order()] == ["", "x2", "x1", "x1,x2"]
        assert a.parse_input_key("x1,x2") == 0b11
        assert a.parse_input_key("") == 0
        with pytest.raises(UndeclaredAtomError):
            a.parse_input_key("y1")

    def test_project(self):
        assert project(0b1010, (1, 3)) == 0b11
        assert project(0b1010, (0, 2)) == 0


class TestBuildProduct:
    def test_triad_shape(self, triad):
        assert triad.n_states == 4
        assert triad.states[triad.initial] == (0, 0, 0)

    def test_successors_in_input_order(self, triad):
        s_all, s_12 = triad.index_of(S_ALL), triad.index_of(S_12)
        assert triad.successors(triad.initial, 0b01) == [s_12, s_all, s_12, s_all]
        assert set(triad.successors(triad.initial, 0b10)) == {triad.index_of(S_23)}
        assert triad.successors(triad.initial, 0b00) == [triad.initial] * 4

    def test_componentwise(self, triad_spec):
        dfas = [build_dfa(f, triad_spec.alphabet.atoms) for f in triad_spec.formulas]
        a = build_product(dfas, triad_spec.alphabet)
        for s, state in enumerate(a.states):
            for sym in range(1 << a.alphabet.size):
                expected = tuple(d.delta(q, sym) for d, q in zip(dfas, state))
                assert a.states[a.delta[s][sym]] == expected

    def test_state_bound(self):
        alphabet = Alphabet(["x"], ["y"])
        dfas = [build_dfa(parse_formula("F y"), alphabet.atoms), build_dfa(parse_formula("X y"), alphabet.atoms)]
        a = build_product(dfas, alphabet)
        assert a.n_states <= dfas[0].n_states * dfas[1].n_states

    def test_alphabet_mismatch(self, triad_dfas):
        with pytest.raises(SpecError):
            build_product(triad_dfas, Alphabet(["x1"], ["y1", "y2"]))

    def test_goal_count(self):
        with pytest.raises(SpecError):
            build_product([], TRIAD_ALPHABET)

    def test_state_ceiling(self, triad_dfas):
        with pytest.raises(ResourceError) as exc_info:
            build_product(triad_dfas, TRIAD_ALPHABET, Limits(max_product_states=3))
        assert exc_info.value.limit == "product states"

    def test_atom_ceiling(self, triad_dfas):
        with pytest.raises(ResourceError):
            build_product(triad_dfas, TRIAD_ALPHABET, Limits(max_explicit_atoms=3))

    def test_unknown_state(self, triad):
        with pytest.raises(KeyError):
            triad.index_of((0, 1, 2))


class TestSatGoals:
    def test_triad(self, triad):
        assert sat_goals(triad, triad.initial) == 0
        assert sat_goals(triad, triad.index_of(S_ALL)) == 0b111
        assert sat_goals(triad, triad.index_of(S_12)) == 0b011
        assert sat_goals(triad, triad.index_of(S_23)) == 0b110

    def test_accepting(self, triad):
        assert triad.accepting(2) == {triad.index_of(S_ALL), triad.index_of(S_23)}

    @pytest.mark.parametrize("seed", range(20))
    def test_complete(self, random_arena, seed):
        a = random_arena(seed)
        for s, state in enumerate(a.states):
            for c in range(1 << a.n_goals):
                holds = all(a.dfas[i].is_final(state[i]) for i in range(a.n_goals) if c >> i & 1)
                assert holds == (c & ~sat_goals(a, s) == 0)


def test_to_dot(triad):
    dot = arena_mod.to_dot(triad)
    assert dot.startswith("digraph arena {")
    s_all = triad.index_of(S_ALL)
    assert f'  s{s_all} [label="s{s_all} [1, 1, 1]\\n{{g1,g2,g3}}"];' in dot
    assert '  s0 -> s0 [label="!y1 & !y2"];' in dot


def test_random_successor_spot_check(random_arena):
    rng = random.Random(7)
    a = random_arena(3)
    for _ in range(50):
        s = rng.randrange(a.n_states)
        y = rng.randrange(1 << a.alphabet.n_outputs)
        x = rng.randrange(1 << a.alphabet.n_inputs)
        t = a.successor(s, y, x)
        sym = a.alphabet.symbol(x, y)
        assert a.states[t] == tuple(d.delta(q, sym) for d, q in zip(a.dfas, a.states[s]))
