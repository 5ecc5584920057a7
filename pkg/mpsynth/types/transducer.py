from __future__ import annotations

from typing import Dict, List, Union

from typing_extensions import Literal, TypedDict


class TransducerStateDoc(TypedDict):
    # state id, 0 for the initial state
    id: int
    # output valuation over every output atom, or "done"
    output: Union[Dict[str, bool], Literal["done"]]
    # successor per input valuation, keyed by the true inputs joined by ","
    next: Dict[str, int]


class TransducerDoc(TypedDict):
    # input atoms in declaration order
    inputs: List[str]
    # output atoms in declaration order
    outputs: List[str]
    # id of the initial state
    initial: int
    # states in id order
    states: List[TransducerStateDoc]
