from __future__ import annotations

from typing import AbstractSet, Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

from .exceptions import PartitionError, UndeclaredAtomError

Valuation = FrozenSet[str]


class Alphabet:
    """Atomic propositions split into environment inputs and agent outputs.

    A symbol is an integer over ``atoms = inputs + outputs``: bit ``j`` is set
    iff ``atoms[j]`` is true. Input valuations and output valuations are
    integers over ``inputs`` and ``outputs`` respectively, so
    ``symbol = x | (y << len(inputs))``.

    :param inputs: environment-controlled atoms, in declaration order
    :param outputs: agent-controlled atoms, in declaration order
    """

    def __init__(self, inputs: Iterable[str], outputs: Iterable[str]):
        self.inputs: Tuple[str, ...] = tuple(inputs)
        self.outputs: Tuple[str, ...] = tuple(outputs)
        seen: Dict[str, int] = {}
        clashes: List[str] = []
        for name in self.inputs + self.outputs:
            if name in seen and name not in clashes:
                clashes.append(name)
            seen[name] = seen.get(name, 0) + 1
        if clashes:
            raise PartitionError(clashes)
        self.atoms: Tuple[str, ...] = self.inputs + self.outputs
        self._index = {name: j for j, name in enumerate(self.atoms)}

    def __repr__(self) -> str:
        return f"Alphabet(inputs={list(self.inputs)}, outputs={list(self.outputs)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Alphabet):
            return NotImplemented
        return self.inputs == other.inputs and self.outputs == other.outputs

    def __hash__(self) -> int:
        return hash((self.inputs, self.outputs))

    def __contains__(self, name: object) -> bool:
        return name in self._index

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    @property
    def size(self) -> int:
        return len(self.atoms)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UndeclaredAtomError(name) from None

    def symbol(self, x: int, y: int) -> int:
        """Pack an input valuation and an output valuation into one symbol."""
        return x | (y << self.n_inputs)

    def split(self, symbol: int) -> Tuple[int, int]:
        """Return ``(x, y)`` for a symbol."""
        return symbol & ((1 << self.n_inputs) - 1), symbol >> self.n_inputs

    def encode(self, valuation: AbstractSet[str]) -> int:
        """Return the symbol of the set of true atoms."""
        sym = 0
        for name in valuation:
            sym |= 1 << self.index(name)
        return sym

    def decode(self, symbol: int) -> Valuation:
        if symbol >> self.size:
            raise ValueError(f"symbol {symbol} has bits outside {self.size} atoms")
        return frozenset(a for j, a in enumerate(self.atoms) if symbol >> j & 1)

    def input_set(self, x: int) -> Valuation:
        return frozenset(a for j, a in enumerate(self.inputs) if x >> j & 1)

    def output_set(self, y: int) -> Valuation:
        return frozenset(a for j, a in enumerate(self.outputs) if y >> j & 1)

    def input_value(self, atoms: AbstractSet[str]) -> int:
        x = 0
        for j, a in enumerate(self.inputs):
            if a in atoms:
                x |= 1 << j
        return x

    def output_value(self, atoms: AbstractSet[str]) -> int:
        y = 0
        for j, a in enumerate(self.outputs):
            if a in atoms:
                y |= 1 << j
        return y

    def inputs_in_order(self) -> Iterator[int]:
        """Yield input valuations lexicographically (first input most significant,
        false before true)."""
        return lexicographic(self.n_inputs)

    def outputs_in_order(self) -> Iterator[int]:
        """Yield output valuations lexicographically (first output most
        significant, false before true)."""
        return lexicographic(self.n_outputs)

    def input_key(self, x: int) -> str:
        """Comma-joined true inputs in declaration order, ``""`` for none."""
        return ",".join(a for j, a in enumerate(self.inputs) if x >> j & 1)

    def parse_input_key(self, key: str) -> int:
        if not key:
            return 0
        atoms = key.split(",")
        for a in atoms:
            if a not in self.inputs:
                raise UndeclaredAtomError(a)
        return self.input_value(set(atoms))


def lexicographic(width: int) -> Iterator[int]:
    """Yield all valuations of ``width`` variables lexicographically.

    Variable ``0`` is the most significant position and false precedes true,
    so the order is the binary count read with bit ``0`` as the leading digit.
    """
    for rank in range(1 << width):
        yield reverse_bits(rank, width)


def reverse_bits(value: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (value & 1)
        value >>= 1
    return out


def project(symbol: int, positions: Sequence[int]) -> int:
    """Gather the bits of ``symbol`` at ``positions`` into a dense integer."""
    local = 0
    for j, p in enumerate(positions):
        if symbol >> p & 1:
            local |= 1 << j
    return local
