from __future__ import annotations

import dataclasses
from typing import Iterable, List, Sequence, Set, Tuple

from .alphabet import Alphabet
from .exceptions import DuplicateLabelError, SpecError, UndeclaredAtomError
from .formula import Formula, atoms, to_text
from .utils import bits, mask_of


@dataclasses.dataclass(frozen=True)
class Goal:
    label: str
    formula: Formula


@dataclasses.dataclass(frozen=True)
class Spec:
    """A multi-property synthesis problem.

    :param inputs: environment-controlled atoms
    :param outputs: agent-controlled atoms
    :param goals: labelled goals in file order
    """

    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    goals: Tuple[Goal, ...]

    def __post_init__(self) -> None:
        alphabet = Alphabet(self.inputs, self.outputs)
        if not self.goals:
            raise SpecError("a specification needs at least one goal")
        seen: Set[str] = set()
        for goal in self.goals:
            if goal.label in seen:
                raise DuplicateLabelError(goal.label)
            seen.add(goal.label)
            for name in sorted(atoms(goal.formula)):
                if name not in alphabet:
                    raise UndeclaredAtomError(name)
        object.__setattr__(self, "_alphabet", alphabet)

    @classmethod
    def build(
        cls,
        inputs: Iterable[str],
        outputs: Iterable[str],
        goals: Iterable[Tuple[str, Formula]],
    ) -> Spec:
        return cls(
            tuple(inputs),
            tuple(outputs),
            tuple(Goal(label, f) for label, f in goals),
        )

    @property
    def alphabet(self) -> Alphabet:
        return getattr(self, "_alphabet")

    @property
    def n(self) -> int:
        return len(self.goals)

    @property
    def labels(self) -> List[str]:
        return [g.label for g in self.goals]

    @property
    def formulas(self) -> List[Formula]:
        return [g.formula for g in self.goals]

    def index_of(self, label: str) -> int:
        for i, goal in enumerate(self.goals):
            if goal.label == label:
                return i
        raise SpecError(f"unknown goal label: {label}")

    def mask_of(self, labels: Iterable[str]) -> int:
        """Return the goal-set bitmask of the given labels."""
        return mask_of(self.index_of(label) for label in labels)

    def labels_of(self, mask: int) -> List[str]:
        """Return the sorted labels of a goal-set bitmask."""
        return sorted(self.goals[i].label for i in bits(mask))

    def to_text(self) -> str:
        """Render in the ``.mpl`` format accepted by :func:`parse_spec`."""
        lines = [
            "INPUTS: " + " ".join(self.inputs),
            "OUTPUTS: " + " ".join(self.outputs),
        ]
        lines.extend(f"GOAL {g.label}: {to_text(g.formula)}" for g in self.goals)
        return "\n".join(line.rstrip() for line in lines) + "\n"


def format_goal_set(labels: Sequence[str]) -> str:
    return "{" + ",".join(labels) + "}"
