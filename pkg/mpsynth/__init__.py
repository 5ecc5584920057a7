"""Top-level package for mpsynth."""

from importlib import metadata

mpsynth_metadata = metadata.metadata(__package__)


__author__ = mpsynth_metadata["Author"]
__email__ = mpsynth_metadata["Author-email"]
__version__ = mpsynth_metadata["Version"]


from .alphabet import Alphabet
from .arena import ProductArena, build_product
from .config import Limits
from .dfa import Dfa, build_dfa
from .enumeration import EnumReport, enumerate_maximal
from .exceptions import (
    MpsynthError,
    ParseError,
    ResourceError,
    SpecError,
    UnrealizableError,
)
from .formats import ENUM_CSV, JSON, NDJSON, REPORT_CSV
from .formula import Formula
from .parser import parse_formula, parse_spec, read_spec
from .pipeline import Synthesizer
from .spec import Goal, Spec
from .transducer import Transducer
from .types import (
    EnumRow,
    IterationStats,
    RelationDoc,
    ReportRow,
    TransducerDoc,
)

__all__ = [
    "Alphabet",
    "build_dfa",
    "build_product",
    "Dfa",
    "ENUM_CSV",
    "enumerate_maximal",
    "EnumReport",
    "EnumRow",
    "Formula",
    "Goal",
    "IterationStats",
    "JSON",
    "Limits",
    "MpsynthError",
    "NDJSON",
    "parse_formula",
    "parse_spec",
    "ParseError",
    "ProductArena",
    "read_spec",
    "RelationDoc",
    "REPORT_CSV",
    "ReportRow",
    "ResourceError",
    "Spec",
    "SpecError",
    "Synthesizer",
    "Transducer",
    "TransducerDoc",
    "UnrealizableError",
]
