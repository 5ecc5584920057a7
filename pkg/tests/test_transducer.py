import pytest

from mpsynth.exceptions import SpecError
from mpsynth.transducer import Transducer, TransducerState
from mpsynth.types import TransducerDoc

from conftest import TRIAD_ALPHABET
from utils import validate


@pytest.fixture
def t():
    return Transducer(
        TRIAD_ALPHABET,
        [TransducerState(0b01, (1, 2, 1, 2)), TransducerState(None), TransducerState(None)],
    )


def test_step(t):
    assert t.step(0, 0b01) == 2
    assert t.output(0) == 0b01
    with pytest.raises(ValueError):
        t.step(1, 0)


def test_successor_count():
    with pytest.raises(SpecError):
        Transducer(TRIAD_ALPHABET, [TransducerState(0, (0, 0))])


def test_unknown_successor():
    with pytest.raises(SpecError):
        Transducer(TRIAD_ALPHABET, [TransducerState(0, (0, 0, 0, 3))])


def test_doc(t):
    doc = validate(TransducerDoc, t.to_doc())
    assert doc["inputs"] == ["x1", "x2"]
    assert doc["initial"] == 0
    assert doc["states"][1] == {"id": 1, "output": "done", "next": {}}
    assert list(doc["states"][0]["next"]) == ["", "x2", "x1", "x1,x2"]


def test_from_doc(t):
    assert Transducer.from_doc(t.to_doc()) == t


@pytest.mark.parametrize(
    "change",
    [
        lambda d: d.pop("outputs"),
        lambda d: d.update(initial=1),
        lambda d: d["states"][0]["next"].pop("x1"),
        lambda d: d["states"][0]["next"].update({"y1": 0}),
        lambda d: d["states"][2].update(id=7),
        lambda d: d["states"][0].update(output=None),
    ],
)
def test_malformed(t, change):
    doc = t.to_doc()
    change(doc)
    with pytest.raises(SpecError):
        Transducer.from_doc(doc)


def test_to_dot(t):
    dot = t.to_dot()
    assert 't0 [label="0\\nY={y1}"];' in dot
    assert 't1 [shape=doublecircle, label="1\\ndone"];' in dot
    assert 't0 -> t1 [label="{} {x2}"];' in dot
    assert 't0 -> t2 [label="{x1} {x1,x2}"];' in dot
