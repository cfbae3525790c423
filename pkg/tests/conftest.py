from fractions import Fraction

import pytest
from hypothesis import strategies as st

from cuntzli.acting_system import SystemSpec
from cuntzli.exact_linalg import IntegerMatrix

A_EX = IntegerMatrix([[0, 2], [1, -2]])
B_EX = IntegerMatrix([[2, 1], [0, 2]])


@pytest.fixture
def dyadic():
    return SystemSpec.single([[2]])


@pytest.fixture
def skew():
    return SystemSpec.single(A_EX)


@pytest.fixture
def scalars():
    return SystemSpec.scalars(2, [B_EX])


SPECS = {
    "dyadic": SystemSpec.single([[2]]),
    "skew": SystemSpec.single(A_EX),
    "scalars": SystemSpec.scalars(2, [B_EX]),
}


def nonsingular_matrices(n, bound=6):
    entries = st.lists(st.integers(-bound, bound), min_size=n * n, max_size=n * n)
    return (
        entries.map(lambda xs: IntegerMatrix([xs[i * n : (i + 1) * n] for i in range(n)]))
        .filter(lambda m: m.det() != 0)
    )


def rationals(bound=20, den=12):
    return st.builds(Fraction, st.integers(-bound, bound), st.integers(1, den))
