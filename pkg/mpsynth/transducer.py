from __future__ import annotations

import dataclasses
import logging
from typing import Any, Dict, List, Mapping, Optional, Set, Tuple

from .alphabet import Alphabet
from .exceptions import SpecError
from .types import TransducerDoc, TransducerStateDoc

LOG = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class TransducerState:
    # output valuation over the outputs, None for the done action
    output: Optional[int]
    # successor per input valuation, empty when done
    next: Tuple[int, ...] = ()
    # product arena state this state was extracted from, if known
    origin: Optional[int] = None

    @property
    def done(self) -> bool:
        return self.output is None


class Transducer:
    """Finite-state strategy: per state an output valuation or ``done``.

    :param alphabet: inputs read and outputs written
    :param states: states indexed by id; state ``0`` is initial
    """

    def __init__(self, alphabet: Alphabet, states: List[TransducerState]):
        self.alphabet = alphabet
        self.states = states
        self.initial = 0
        width = 1 << alphabet.n_inputs
        for q, state in enumerate(states):
            if state.done:
                continue
            if len(state.next) != width:
                raise SpecError(f"state {q} has {len(state.next)} successors, expected {width}")
            for t in state.next:
                if not 0 <= t < len(states):
                    raise SpecError(f"state {q} moves to unknown state {t}")

    def __repr__(self) -> str:
        return f"Transducer(states={len(self.states)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Transducer):
            return NotImplemented
        return self.to_doc() == other.to_doc()

    @property
    def n_states(self) -> int:
        return len(self.states)

    def output(self, q: int) -> Optional[int]:
        return self.states[q].output

    def step(self, q: int, x: int) -> int:
        state = self.states[q]
        if state.done:
            raise ValueError(f"state {q} is done")
        return state.next[x]

    def to_doc(self) -> TransducerDoc:
        """Return the JSON document of this strategy."""
        a = self.alphabet
        docs: List[TransducerStateDoc] = []
        for q, state in enumerate(self.states):
            if state.output is None:
                docs.append({"id": q, "output": "done", "next": {}})
                continue
            output = {name: bool(state.output >> j & 1) for j, name in enumerate(a.outputs)}
            nxt = {a.input_key(x): state.next[x] for x in a.inputs_in_order()}
            docs.append({"id": q, "output": output, "next": nxt})
        return {
            "inputs": list(a.inputs),
            "outputs": list(a.outputs),
            "initial": self.initial,
            "states": docs,
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> Transducer:
        """Rebuild a strategy from its JSON document.

        :raises SpecError: if the document is malformed
        """
        try:
            alphabet = Alphabet(doc["inputs"], doc["outputs"])
            if doc["initial"] != 0:
                raise SpecError("initial state must be 0")
            by_id: Dict[int, TransducerState] = {}
            for entry in doc["states"]:
                output = entry["output"]
                if output == "done":
                    by_id[entry["id"]] = TransducerState(None)
                    continue
                y = alphabet.output_value({k for k, v in output.items() if v})
                nxt = [0] * (1 << alphabet.n_inputs)
                seen: Set[int] = set()
                for key, target in entry["next"].items():
                    x = alphabet.parse_input_key(key)
                    nxt[x] = target
                    seen.add(x)
                if len(seen) != len(nxt):
                    raise SpecError(f"state {entry['id']} does not cover every input")
                by_id[entry["id"]] = TransducerState(y, tuple(nxt))
        except (KeyError, TypeError, AttributeError) as e:
            raise SpecError(f"malformed transducer document: {e}") from e
        if sorted(by_id) != list(range(len(by_id))):
            raise SpecError("transducer state ids must be 0..n-1")
        return cls(alphabet, [by_id[q] for q in range(len(by_id))])

    def to_dot(self, name: str = "strategy") -> str:
        a = self.alphabet
        lines = [f"digraph {name} {{", "  rankdir=LR;", "  init [shape=point];"]
        for q, state in enumerate(self.states):
            if state.output is None:
                lines.append(f'  t{q} [shape=doublecircle, label="{q}\\ndone"];')
            else:
                shown = ",".join(sorted(a.output_set(state.output)))
                lines.append(f'  t{q} [label="{q}\\nY={{{shown}}}"];')
        lines.append(f"  init -> t{self.initial};")
        for q, state in enumerate(self.states):
            grouped: Dict[int, List[str]] = {}
            for x in a.inputs_in_order():
                if state.done:
                    break
                grouped.setdefault(state.next[x], []).append("{" + a.input_key(x) + "}")
            for t, keys in sorted(grouped.items()):
                lines.append(f'  t{q} -> t{t} [label="{" ".join(keys)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
