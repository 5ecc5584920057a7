import os
import random
from typing import Callable, List

import pytest

from mpsynth import parser
from mpsynth.alphabet import Alphabet
from mpsynth.arena import ProductArena, build_product
from mpsynth.dfa import Dfa

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

TRIAD_ALPHABET = Alphabet(["x1", "x2"], ["y1", "y2"])

# columns over (x1, y1, y2), x1 least significant
TRIAD_START = (0, 0, 2, 1, 3, 3, 2, 1)

#: the state every goal accepts, the one accepting g1 and g2, the one
#: accepting g2 and g3
S_ALL, S_12, S_23 = (1, 1, 1), (2, 2, 2), (3, 3, 3)


def triad_dfa(finals) -> Dfa:
    sink = lambda q: (q,) * 8  # noqa: E731
    return Dfa(
        atoms=TRIAD_ALPHABET.atoms,
        support=(0, 2, 3),
        table=(TRIAD_START, sink(1), sink(2), sink(3)),
        initial=0,
        finals=frozenset(finals),
    )


@pytest.fixture
def triad_dfas() -> List[Dfa]:
    return [triad_dfa({1, 2}), triad_dfa({1, 2, 3}), triad_dfa({1, 3})]


@pytest.fixture
def triad(triad_dfas) -> ProductArena:
    return build_product(triad_dfas, TRIAD_ALPHABET)


@pytest.fixture
def triad_path() -> str:
    return os.path.join(FIXTURES, "triad.mpl")


@pytest.fixture
def triad_spec(triad_path):
    return parser.read_spec(triad_path)


def random_dfa(rng: random.Random, alphabet: Alphabet, max_states: int = 4) -> Dfa:
    n = rng.randint(2, max_states)
    support = tuple(sorted(rng.sample(range(alphabet.size), rng.randint(1, alphabet.size))))
    width = 1 << len(support)
    table = tuple(tuple(rng.randrange(n) for _ in range(width)) for _ in range(n))
    finals = frozenset(q for q in range(1, n) if rng.random() < 0.4)
    return Dfa(alphabet.atoms, support, table, 0, finals)


def make_random_arena(seed: int, max_goals: int = 3) -> ProductArena:
    rng = random.Random(seed)
    alphabet = Alphabet(
        [f"x{i + 1}" for i in range(rng.randint(1, 2))],
        [f"y{i + 1}" for i in range(rng.randint(1, 2))],
    )
    dfas = [random_dfa(rng, alphabet) for _ in range(rng.randint(1, max_goals))]
    return build_product(dfas, alphabet)


@pytest.fixture
def random_arena() -> Callable[..., ProductArena]:
    return make_random_arena
