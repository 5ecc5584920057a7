"""Front end for formulas and ``.mpl`` specification files.

A ``.mpl`` file is line oriented::

    # comments run to the end of the line
    INPUTS: x1 x2
    OUTPUTS: y1 y2
    GOAL g1: (!y1 & !y2) U y1

Operator precedence, from tightest to loosest: the unary operators
``! X WX F G``, then ``U`` and ``R`` (right associative), ``&``, ``|``,
``->`` (right associative) and ``<->`` (left associative).
"""
from __future__ import annotations

import logging
from typing import List, Optional, Tuple

from lark import Lark, Token, Transformer, Tree, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput

from . import formula as fm
from .alphabet import Alphabet
from .exceptions import ParseError, SpecError, UndeclaredAtomError
from .formula import Formula
from .spec import Goal, Spec

LOG = logging.getLogger(__name__)

GRAMMAR = r"""
formula_text: _NL? formula _NL?

spec: _NL? _item (_NL _item)* _NL?
_item: inputs | outputs | goal
inputs: "INPUTS" ":" NAME*
outputs: "OUTPUTS" ":" NAME*
goal: "GOAL" NAME ":" formula

?formula: equiv
?equiv: implication
    | equiv "<->" implication -> iff
?implication: disjunction
    | disjunction "->" implication -> implies
?disjunction: conjunction
    | disjunction "|" conjunction -> disj
?conjunction: binary
    | conjunction "&" binary -> conj
?binary: unary
    | unary "U" binary -> until
    | unary "R" binary -> release
?unary: primary
    | "!" unary -> neg
    | "X" unary -> next
    | "WX" unary -> weak_next
    | "F" unary -> eventually
    | "G" unary -> always
?primary: "true" -> true
    | "false" -> false
    | NAME -> atom
    | "(" formula ")"

NAME: /[A-Za-z_][A-Za-z0-9_]*/
COMMENT: /#[^\n]*/
_NL: /(\r?\n[\t ]*(#[^\n]*)?)+/

%ignore /[\t ]+/
%ignore COMMENT
"""


_parser = Lark(GRAMMAR, parser="lalr", start=["formula_text", "spec"])


@v_args(inline=True)
class _Builder(Transformer[Token, object]):
    def true(self) -> Formula:
        return fm.TRUE

    def false(self) -> Formula:
        return fm.FALSE

    def atom(self, name: Token) -> Formula:
        return fm.atom(str(name))

    def neg(self, f: Formula) -> Formula:
        return fm.neg(f)

    def next(self, f: Formula) -> Formula:
        return fm.next_(f)

    def weak_next(self, f: Formula) -> Formula:
        return fm.weak_next(f)

    def eventually(self, f: Formula) -> Formula:
        return fm.eventually(f)

    def always(self, f: Formula) -> Formula:
        return fm.always(f)

    def until(self, a: Formula, b: Formula) -> Formula:
        return fm.until(a, b)

    def release(self, a: Formula, b: Formula) -> Formula:
        return fm.release(a, b)

    def conj(self, a: Formula, b: Formula) -> Formula:
        return fm.conj(a, b)

    def disj(self, a: Formula, b: Formula) -> Formula:
        return fm.disj(a, b)

    def implies(self, a: Formula, b: Formula) -> Formula:
        return fm.implies(a, b)

    def iff(self, a: Formula, b: Formula) -> Formula:
        return fm.iff(a, b)

    def formula_text(self, f: Formula) -> Formula:
        return f

    def inputs(self, *names: Token) -> Tuple[str, List[str]]:
        return "inputs", [str(n) for n in names]

    def outputs(self, *names: Token) -> Tuple[str, List[str]]:
        return "outputs", [str(n) for n in names]

    def goal(self, label: Token, f: Formula) -> Tuple[str, Tuple[str, Formula]]:
        return "goal", (str(label), f)

    def spec(self, *items: Tuple[str, object]) -> List[Tuple[str, object]]:
        return list(items)


def _parse(text: str, start: str) -> object:
    try:
        tree: Tree[Token] = _parser.parse(text, start=start)
    except UnexpectedInput as e:
        line, column = e.line, e.column
        if isinstance(e, UnexpectedEOF) or line is None or line < 1:
            lines = text.splitlines() or [""]
            line, column = len(lines), len(lines[-1]) + 1
        message = str(e).strip().splitlines()[0]
        raise ParseError(message, line, column, e) from e
    return _Builder().transform(tree)


def _check_atoms(f: Formula, alphabet: Optional[Alphabet]) -> None:
    if alphabet is None:
        return
    for name in sorted(fm.atoms(f)):
        if name not in alphabet:
            raise UndeclaredAtomError(name)


def parse_formula(text: str, alphabet: Optional[Alphabet] = None) -> Formula:
    """Parse one formula.

    :param text: formula source, e.g. ``"!a U b"``
    :param alphabet: if given, every atom must be declared in it
    :return: the normalized formula
    :raises ParseError: on a syntax error
    :raises UndeclaredAtomError: on an atom missing from ``alphabet``
    """
    if not text.strip():
        raise ParseError("empty formula", 1, 1)
    f = _parse(text, "formula_text")
    assert isinstance(f, Formula)
    _check_atoms(f, alphabet)
    return f


def parse_spec(text: str) -> Spec:
    """Parse a ``.mpl`` specification.

    Several ``INPUTS``/``OUTPUTS`` lines accumulate. Goals keep file order.

    :param text: file contents
    :return: the validated specification
    :raises ParseError: on a syntax error
    :raises PartitionError: if an atom is declared twice
    :raises UndeclaredAtomError: if a goal mentions an undeclared atom
    :raises DuplicateLabelError: if two goals share a label
    """
    items = _parse(text, "spec")
    assert isinstance(items, list)
    inputs: List[str] = []
    outputs: List[str] = []
    goals: List[Goal] = []
    for kind, payload in items:  # type: ignore[misc]
        if kind == "inputs":
            inputs.extend(payload)
        elif kind == "outputs":
            outputs.extend(payload)
        else:
            label, f = payload
            goals.append(Goal(label, f))
    if not goals:
        raise SpecError("a specification needs at least one GOAL line")
    spec = Spec(tuple(inputs), tuple(outputs), tuple(goals))
    LOG.debug(
        "parsed spec with %s inputs, %s outputs, %s goals",
        len(inputs),
        len(outputs),
        len(goals),
    )
    return spec


def read_spec(path: str) -> Spec:
    with open(path, encoding="utf-8") as f:
        return parse_spec(f.read())
