from __future__ import annotations

from .relation import GoalSetDoc, RelationDoc, RelationStateDoc
from .report import Agreement, EngineStats, EnumRow, IterationStats, ReportRow, Verdict
from .transducer import TransducerDoc, TransducerStateDoc

__all__ = [
    "Agreement",
    "EngineStats",
    "EnumRow",
    "GoalSetDoc",
    "IterationStats",
    "RelationDoc",
    "RelationStateDoc",
    "ReportRow",
    "TransducerDoc",
    "TransducerStateDoc",
    "Verdict",
]
