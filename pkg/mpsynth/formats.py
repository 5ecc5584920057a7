from __future__ import annotations

import csv
import io
import json
from typing import (
    Any,
    Dict,
    Generic,
    Iterable,
    Iterator,
    List,
    Mapping,
    Sequence,
    TextIO,
    Type,
    TypeVar,
)

import ndjson  # type: ignore

T = TypeVar("T")

Row = Mapping[str, Any]


class FormatHandler(Generic[T]):
    """Serialize and parse documents of a particular format.

    Instances of this class should override :meth:`dumps`, :meth:`loads`
    and :meth:`parse_stream`; :meth:`dump_stream` writes one
    :meth:`dumps` chunk per item.

    :param name: short name of the format
    """

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"

    def dumps(self, data: T) -> str:
        """Serialize one document.

        :param data: the document
        :return: its text, ending with a newline
        """
        raise NotImplementedError

    def loads(self, text: str) -> T:
        """Parse one document.

        :param text: serialized text
        :return: the document
        """
        raise NotImplementedError

    def dump_stream(self, items: Iterable[T], fp: TextIO) -> None:
        for item in items:
            fp.write(self.dumps(item))
            fp.flush()

    def parse_stream(self, lines: Iterable[str]) -> Iterator[T]:
        """Yield the documents of a stream.

        :param lines: text lines, for example an open file
        :return: iterator over the documents
        """
        raise NotImplementedError


class JsonHandler(FormatHandler[Any]):
    """Handle JSON documents.

    Keys keep their insertion order so output is byte-stable.

    :param str name: the format name
    :param decoder: the decoder to use for the JSON format
    :type decoder: :class:`json.JSONDecoder`
    """

    def __init__(
        self, name: str, decoder: Type[json.JSONDecoder] = json.JSONDecoder, indent: int = 2
    ):
        super().__init__(name=name)
        self.decoder = decoder
        self.indent = indent

    def dumps(self, data: Any) -> str:
        return json.dumps(data, indent=self.indent) + "\n"

    def loads(self, text: str) -> Any:
        return json.loads(text, cls=self.decoder)

    def parse_stream(self, lines: Iterable[str]) -> Iterator[Any]:
        yield self.loads("".join(lines))


class NdjsonHandler(FormatHandler[List[Dict[str, Any]]]):
    """Handle newline-delimited JSON: one compact object per line."""

    def __init__(self) -> None:
        super().__init__(name="ndjson")

    def dumps(self, data: List[Dict[str, Any]]) -> str:
        if not data:
            return ""
        return ndjson.dumps(data) + "\n"

    def loads(self, text: str) -> List[Dict[str, Any]]:
        return ndjson.loads(text)

    def dump_stream(self, items: Iterable[List[Dict[str, Any]]], fp: TextIO) -> None:
        writer = ndjson.writer(fp)
        for batch in items:
            for record in batch:
                writer.writerow(record)
            fp.flush()

    def parse_stream(self, lines: Iterable[str]) -> Iterator[List[Dict[str, Any]]]:
        for line in lines:
            if line.strip():
                yield ndjson.loads(line)


class CsvHandler(FormatHandler[List[Dict[str, Any]]]):
    """Handle CSV tables with a fixed header.

    Floats are written with three decimals and ``None`` as an empty cell.

    :param name: the format name
    :param fieldnames: the column names, in order
    """

    def __init__(self, name: str, fieldnames: Sequence[str]):
        super().__init__(name=name)
        self.fieldnames = list(fieldnames)

    @staticmethod
    def _cell(value: Any) -> Any:
        if value is None:
            return ""
        if isinstance(value, float):
            return f"{value:.3f}"
        return value

    def _writer(self, fp: TextIO) -> "csv.DictWriter[str]":
        return csv.DictWriter(fp, fieldnames=self.fieldnames, lineterminator="\n")

    def dumps(self, data: Iterable[Row]) -> str:
        buffer = io.StringIO()
        writer = self._writer(buffer)
        writer.writeheader()
        for row in data:
            writer.writerow({k: self._cell(row[k]) for k in self.fieldnames})
        return buffer.getvalue()

    def dump_stream(self, items: Iterable[List[Dict[str, Any]]], fp: TextIO) -> None:
        writer = self._writer(fp)
        writer.writeheader()
        for batch in items:
            for row in batch:
                writer.writerow({k: self._cell(row[k]) for k in self.fieldnames})
            fp.flush()

    def loads(self, text: str) -> List[Dict[str, Any]]:
        return [row for batch in self.parse_stream(io.StringIO(text)) for row in batch]

    def parse_stream(self, lines: Iterable[str]) -> Iterator[List[Dict[str, Any]]]:
        reader = csv.DictReader(lines)
        if reader.fieldnames != self.fieldnames:
            raise ValueError(f"expected columns {self.fieldnames}, got {reader.fieldnames}")
        for row in reader:
            yield [dict(row)]


class TextHandler(FormatHandler[str]):
    def __init__(self) -> None:
        super().__init__(name="text")

    def dumps(self, data: str) -> str:
        return data if data.endswith("\n") else data + "\n"

    def loads(self, text: str) -> str:
        return text

    def parse_stream(self, lines: Iterable[str]) -> Iterator[str]:
        for line in lines:
            yield line.rstrip("\n")


#: Basic text
TEXT = TextHandler()

#: Indented JSON documents (transducers, relations, goal-set lists)
JSON = JsonHandler(name="json")

#: Newline-delimited JSON (per-iteration statistics)
NDJSON = NdjsonHandler()

#: One row per checked goal subset of the enumeration baseline
ENUM_CSV = CsvHandler("enum-csv", ["label_set", "verdict", "time_ms", "pruned_by"])

#: One row per benchmark instance
REPORT_CSV = CsvHandler(
    "report-csv",
    [
        "family",
        "n",
        "d",
        "states",
        "mpsynth_fixpoint_ms",
        "mpsynth_extract_ms",
        "enum_ms",
        "agree",
    ],
)
