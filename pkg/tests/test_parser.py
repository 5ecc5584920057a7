import pytest

from mpsynth import exceptions, parser
from mpsynth.alphabet import Alphabet
from mpsynth.formula import TRUE, atom, conj, disj, eventually, implies, iff, neg, next_, until

a, b, c = atom("a"), atom("b"), atom("c")


class TestParseFormula:
    def test_constant(self):
        assert parser.parse_formula("true") is TRUE

    def test_unary_binds_tighter_than_until(self):
        assert parser.parse_formula("!a U b") is until(neg(a), b)

    def test_eventually(self):
        f = parser.parse_formula("F (y1 & x1)")
        assert f is eventually(conj(atom("y1"), atom("x1")))

    def test_precedence(self):
        f = parser.parse_formula("a | b & c -> a <-> b")
        assert f is iff(implies(disj(a, conj(b, c)), a), b)

    def test_right_associative(self):
        assert parser.parse_formula("a U b U c") is until(a, until(b, c))
        assert parser.parse_formula("a -> b -> c") is implies(a, implies(b, c))

    def test_stacked_unary(self):
        assert parser.parse_formula("X !X a") is next_(neg(next_(a)))

    def test_syntax_error_position(self):
        with pytest.raises(exceptions.ParseError) as exc_info:
            parser.parse_formula("a & & b")
        assert exc_info.value.line == 1
        assert exc_info.value.column == 5
        assert exc_info.value.__cause__ is not None

    def test_empty(self):
        with pytest.raises(exceptions.ParseError):
            parser.parse_formula("  ")

    def test_undeclared_atom(self):
        with pytest.raises(exceptions.UndeclaredAtomError) as exc_info:
            parser.parse_formula("a U q", Alphabet(["a"], []))
        assert exc_info.value.atom == "q"


class TestParseSpec:
    def test_minimal(self):
        spec = parser.parse_spec("INPUTS: x\nOUTPUTS: y\nGOAL g1: F y")
        assert spec.inputs == ("x",)
        assert spec.outputs == ("y",)
        assert spec.n == 1
        assert spec.formulas == [eventually(atom("y"))]

    def test_goal_order(self, triad_spec):
        assert triad_spec.labels == ["g1", "g2", "g3"]
        assert triad_spec.inputs == ("x1", "x2")

    def test_comments_and_blank_lines(self):
        text = "# header\n\nINPUTS: x  # env\nOUTPUTS: y\n\nGOAL g1: y\n"
        assert parser.parse_spec(text).labels == ["g1"]

    def test_partition_error(self):
        with pytest.raises(exceptions.PartitionError) as exc_info:
            parser.parse_spec("INPUTS: x y\nOUTPUTS: y\nGOAL g1: F y")
        assert exc_info.value.atoms == ("y",)

    def test_undeclared_atom(self):
        with pytest.raises(exceptions.UndeclaredAtomError):
            parser.parse_spec("INPUTS: x\nOUTPUTS: y\nGOAL g1: F z")

    def test_duplicate_label(self):
        with pytest.raises(exceptions.DuplicateLabelError):
            parser.parse_spec("INPUTS: x\nOUTPUTS: y\nGOAL g1: F y\nGOAL g1: y")

    def test_syntax_error_line(self):
        with pytest.raises(exceptions.ParseError) as exc_info:
            parser.parse_spec("INPUTS: x\nOUTPUTS: y\nGOAL g1: y &&")
        assert (exc_info.value.line, exc_info.value.column) == (3, 13)

    def test_no_goals(self):
        with pytest.raises(exceptions.SpecError):
            parser.parse_spec("INPUTS: x\nOUTPUTS: y\n")

    def test_text_round_trip(self, triad_spec):
        assert parser.parse_spec(triad_spec.to_text()) == triad_spec

    def test_spec_error_exit_code(self):
        assert exceptions.ParseError("x").exit_code == 2
