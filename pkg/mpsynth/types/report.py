from __future__ import annotations

from typing import Optional

from typing_extensions import Literal, TypeAlias, TypedDict

Verdict: TypeAlias = Literal["realizable", "unrealizable", "pruned", "unknown"]

Agreement: TypeAlias = Literal["true", "false", "unknown"]


class EnumRow(TypedDict):
    # goal set as "{g1,g2}"
    label_set: str
    verdict: Verdict
    # wall-clock of the check, 0 when pruned
    time_ms: float
    # the unrealizable subset that pruned this one, "" otherwise
    pruned_by: str


class ReportRow(TypedDict):
    family: str
    n: int
    d: int
    # explicit product states, None when the product was not built
    states: Optional[int]
    mpsynth_fixpoint_ms: float
    mpsynth_extract_ms: float
    # None when the baseline was not run
    enum_ms: Optional[float]
    agree: Agreement


class IterationStats(TypedDict):
    # fixed-point iteration, 1 for the first update
    iteration: int
    # nodes of the winning-state function
    w_nodes: int
    # nodes of the one-step controllable predecessor
    pre_nodes: int
    # nodes in the whole engine
    engine_nodes: int
    elapsed_ms: float


class EngineStats(TypedDict):
    variables: int
    nodes: int
    cache_entries: int
    cache_lookups: int
    cache_hits: int
