from __future__ import annotations

from typing import List

from typing_extensions import Literal, NotRequired, TypedDict


class GoalSetDoc(TypedDict):
    # sorted goal labels
    goals: List[str]
    # least iteration at which the pair entered the relation
    rank: NotRequired[int]


class RelationStateDoc(TypedDict):
    # product state index
    id: int
    # component automaton states
    components: List[int]
    # goal sets stored at the state, sorted by label list
    sets: List[GoalSetDoc]


class RelationDoc(TypedDict):
    # "full" for every realizable set, "maximal" for the antichain
    kind: Literal["full", "maximal"]
    # goal labels in declaration order
    goals: List[str]
    initial: int
    states: List[RelationStateDoc]
