import random

import pytest
from hypothesis import strategies as st

from bdsym import fixtures
from bdsym.core import BijectionTable, Permutation, StateVector, TruthTable


def tables(n):
    size = 1 << n
    return st.lists(st.integers(0, size - 1), min_size=size, max_size=size).map(
        lambda rows: TruthTable(n, tuple(rows))
    )


def bijections(n):
    return st.permutations(range(1 << n)).map(lambda rows: BijectionTable(n, tuple(rows)))


def states(n):
    return st.integers(0, (1 << n) - 1).map(lambda i: StateVector.from_index(n, i))


def coordinate_perms(n):
    return st.permutations(range(1, n + 1)).map(lambda s: Permutation(n, tuple(s)))


def sv(bits: str) -> StateVector:
    return StateVector.parse(bits)


def random_table(rng: random.Random, n: int) -> TruthTable:
    size = 1 << n
    return TruthTable(n, tuple(rng.randrange(size) for _ in range(size)))


@pytest.fixture
def fx():
    return fixtures
