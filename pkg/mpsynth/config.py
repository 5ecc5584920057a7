from __future__ import annotations

import dataclasses
import logging
import os
from typing import List, Mapping, Optional

from typing_extensions import Literal, TypeAlias

LOG = logging.getLogger(__name__)

#: environment variable overriding :attr:`Limits.node_ceiling`
NODE_CEILING_ENV = "MPSYNTH_NODE_CEILING"

VarOrder: TypeAlias = Literal["blocked", "interleaved"]

VAR_ORDERS: List[VarOrder] = ["blocked", "interleaved"]


@dataclasses.dataclass(frozen=True)
class Limits:
    """Resource ceilings shared by every stage of the pipeline.

    Exceeding any of them raises :class:`~mpsynth.exceptions.ResourceError`
    naming the ceiling.
    """

    # states of one minimized automaton (checked during construction)
    max_dfa_states: int = 2**20
    # reachable states of the explicit product arena
    max_product_states: int = 2**22
    # goals accepted by the explicit multi-property solver
    max_explicit_goals: int = 12
    # goals accepted by the enumeration baseline
    max_enum_goals: int = 20
    # atoms one automaton's transition table may range over
    max_support: int = 16
    # atoms the explicit product arena may range over
    max_explicit_atoms: int = 16
    # live nodes in one decision diagram engine
    node_ceiling: int = 2**22
    # rounds one exhaustive strategy check may play, summed over all input sequences
    max_exhaustive_rounds: int = 2**20

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> Limits:
        """Return the default limits with environment overrides applied.

        Only ``MPSYNTH_NODE_CEILING`` is consulted.
        """
        environ = os.environ if environ is None else environ
        raw = environ.get(NODE_CEILING_ENV)
        if not raw:
            return cls()
        try:
            ceiling = int(raw)
        except ValueError:
            LOG.warning("ignoring non-integer %s=%r", NODE_CEILING_ENV, raw)
            return cls()
        if ceiling <= 0:
            LOG.warning("ignoring non-positive %s=%r", NODE_CEILING_ENV, raw)
            return cls()
        return cls(node_ceiling=ceiling)

    def replace(self, **changes: int) -> Limits:
        return dataclasses.replace(self, **changes)


def variable_order(
    blocks: List[List[str]],
    goal_vars: List[str],
    outputs: List[str],
    inputs: List[str],
    preset: VarOrder = "blocked",
) -> List[str]:
    """Lay out decision diagram variables for a preset.

    ``blocked`` puts every state block first, then the goal variables, then
    outputs, then inputs. ``interleaved`` follows each state block with its
    goal variable.

    :param blocks: state variable names per goal, in goal order
    :param goal_vars: one goal variable per goal
    :param outputs: output variable names
    :param inputs: input variable names
    :param preset: layout name
    :return: variable names from top to bottom
    """
    if preset == "blocked":
        order = [v for block in blocks for v in block] + list(goal_vars)
    elif preset == "interleaved":
        order = []
        for block, k in zip(blocks, goal_vars):
            order.extend(block)
            order.append(k)
    else:
        raise ValueError(f"unknown variable order preset: {preset}")
    return order + list(outputs) + list(inputs)
