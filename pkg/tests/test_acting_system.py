import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuntzli.acting_system import (
    Factorization,
    Family,
    GroupElement,
    SystemSpec,
    Verdict,
    check_C1,
    check_C2,
    check_C3_2x2,
    check_C3_sufficient,
    check_effective,
    eigenvector_pm1,
    factorize,
    generator_products,
    intersection_chain,
    is_dilation,
    ore_witness,
)
from cuntzli.errors import DeterminantTooSmall, NotFactorizable, OreSearchFailed, WrongDimension
from cuntzli.exact_linalg import IntegerMatrix, RationalMatrix, lattice_member, quotient_group

from conftest import A_EX, B_EX, SPECS, nonsingular_matrices, rationals

I2 = IntegerMatrix.identity(2)


def test_group_element_composition_is_map_composition():
    g1 = GroupElement((1, 0), [[0, 1], [1, 0]])
    g2 = GroupElement((Fraction(1, 2), 3), [[2, 0], [0, 1]])
    x = (5, -7)
    assert (g1 * g2)(x) == g1(g2(x))
    assert (g1 * g1.inverse()).is_identity()


def test_factorize_examples(dyadic):
    assert factorize(GroupElement.identity(1), dyadic) == Factorization(IntegerMatrix([[1]]), (0,), IntegerMatrix([[1]]))
    assert factorize(GroupElement((Fraction(1, 2),), [[1]]), dyadic) == Factorization(
        IntegerMatrix([[2]]), (1,), IntegerMatrix([[2]])
    )
    spec = SystemSpec.scalars(2)
    assert factorize(GroupElement((Fraction(1, 3), 0), I2), spec) == Factorization(
        IntegerMatrix.scalar(2, 3), (1, 0), IntegerMatrix.scalar(2, 3)
    )


def test_factorize_rejects_foreign_linear_part(skew):
    with pytest.raises(NotFactorizable):
        factorize(GroupElement((0, 0), [[3, 0], [0, 1]]), skew)


@st.composite
def group_elements(draw, spec):
    gens = spec.word_generators
    word = lambda: draw(st.lists(st.sampled_from(gens), max_size=3))
    a = I2 if spec.n == 2 else IntegerMatrix([[1]])
    b = a
    for g in word():
        a = a @ g
    for g in word():
        b = b @ g
    m = tuple(draw(st.integers(-9, 9)) for _ in range(spec.n))
    return GroupElement(a.inverse() @ m, a.inverse() @ b)


@pytest.mark.parametrize("name", sorted(SPECS))
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_factorization_recomposes(name, data):
    spec = SPECS[name]
    g = data.draw(group_elements(spec))
    fac = factorize(g, spec)
    assert spec.in_P(fac.a) and spec.in_P(fac.b)
    assert fac.a.inverse() @ fac.m == g.v
    assert fac.a.inverse() @ fac.b == g.h
    assert fac.group_element() == g


def test_ore_examples(scalars):
    general = SystemSpec(1, ([[2]], [[3]]), Family.GENERAL)
    assert ore_witness([[2]], [[3]], general) == (IntegerMatrix([[3]]), IntegerMatrix([[2]]))
    assert ore_witness(B_EX, IntegerMatrix.scalar(2, 2), scalars) == (
        IntegerMatrix.scalar(2, 2),
        B_EX,
    )
    single = SystemSpec.single(A_EX)
    assert ore_witness(A_EX @ A_EX, A_EX @ A_EX @ A_EX, single) == (A_EX, I2)


@pytest.mark.parametrize("name", sorted(SPECS))
def test_ore_witness_equation(name):
    spec = SPECS[name]
    products = generator_products(spec, 2) if spec.family is Family.SINGLE_MATRIX else [
        p for p in generator_products(SystemSpec.scalars(2, spec.word_generators), 2)
    ]
    for a, b in itertools.product(products, repeat=2):
        alpha, beta = ore_witness(a, b, spec, side="right")
        assert a @ alpha == b @ beta
        assert spec.in_P(alpha) and spec.in_P(beta)
        alpha, beta = ore_witness(a, b, spec, side="left")
        assert alpha @ a == beta @ b


def test_ore_search_can_fail():
    # opposite triangular generators share no common multiple among short words
    spec = SystemSpec(2, ([[2, 1], [0, 3]], [[3, 0], [1, 2]]), Family.GENERAL)
    with pytest.raises(OreSearchFailed) as info:
        ore_witness(spec.generators[0], spec.generators[1], spec, depth=2)
    assert info.value.depth == 2


def test_check_C1(scalars, skew):
    assert check_C1(scalars).verdict is Verdict.HOLDS_BY_SCALARS
    assert check_C1(skew).verdict is Verdict.HOLDS
    spec = SystemSpec(2, ([[2, 1], [0, 1]], [[1, 0], [1, 2]]), Family.GENERAL)
    assert check_C1(spec, depth=2).verdict in (Verdict.HOLDS, Verdict.INCONCLUSIVE)


def test_check_C2():
    cert = check_C2(SystemSpec.single(A_EX))
    assert cert and cert.indices == (2,)
    for r in range(1, 6):
        assert quotient_group(IntegerMatrix([[2]]) ** r).order == 2**r
    unimodular = check_C2(SystemSpec(2, ([[1, 1], [0, 1]],), Family.GENERAL))
    assert unimodular and unimodular.degenerate == (0,)


def test_check_C3_2x2_examples():
    assert check_C3_2x2(A_EX)
    assert not check_C3_2x2([[1, 0], [0, 2]])
    assert check_C3_2x2([[2, 0], [0, 2]])
    with pytest.raises(WrongDimension):
        check_C3_2x2([[2]])
    with pytest.raises(DeterminantTooSmall):
        check_C3_2x2([[1, 1], [0, 1]])


def test_check_C3_sufficient_examples(scalars):
    assert check_C3_sufficient(SystemSpec.single([[2]])).verdict is Verdict.DILATION_CERTIFIED
    assert check_C3_sufficient(scalars).verdict is Verdict.SCALARS_CERTIFIED
    result = check_C3_sufficient(SystemSpec.single([[1, 1], [0, 2]]))
    assert result.verdict is Verdict.EIGENVALUE_OBSTRUCTION
    assert result.certificate["vector"] == (1, 0)
    assert check_C3_sufficient(SystemSpec.single(A_EX)).verdict is Verdict.INCONCLUSIVE
    numeric = check_C3_sufficient(SystemSpec.single(IntegerMatrix.scalar(3, 2)))
    assert numeric.verdict is Verdict.DILATION_CERTIFIED and numeric.certificate["mode"] == "numeric"


def test_single_fixed_vector_is_not_a_joint_obstruction():
    spec = SystemSpec(2, ([[1, 0], [0, 2]], [[2, 0], [0, 1]]), Family.GENERAL)
    assert check_C3_sufficient(spec).verdict is not Verdict.EIGENVALUE_OBSTRUCTION


@settings(max_examples=300, deadline=None)
@given(nonsingular_matrices(2, bound=5))
def test_exact_dilation_test_matches_numeric(A):
    import numpy as np

    exact, is_exact = is_dilation(A)
    moduli = np.abs(np.linalg.eigvals(np.array(A.tolist(), dtype=float)))
    assert is_exact
    if abs(min(moduli) - 1) > 1e-9:
        assert exact == bool(min(moduli) > 1)


def test_check_effective():
    assert not check_effective(I2)
    assert check_effective(IntegerMatrix.scalar(2, 2))
    assert check_effective([[1, 1], [0, 1]])


@settings(max_examples=100, deadline=None)
@given(nonsingular_matrices(2, bound=3))
def test_effective_iff_moves_a_basis_vector(h):
    moves = any(h @ e != e for e in [(1, 0), (0, 1)])
    assert check_effective(h) == moves


def test_intersection_chain_examples():
    chain = intersection_chain([[2]], 5)
    assert [L[0, 0] for L in chain] == [2**r for r in range(6)]
    chain = intersection_chain(A_EX, 6)
    assert [abs(L.det()) for L in chain] == [2**r for r in range(7)]
    A = IntegerMatrix([[1, 1], [0, 3]])
    v = eigenvector_pm1(A, 1)
    for L in intersection_chain(A, 6):
        assert lattice_member(v, L)


@settings(max_examples=60, deadline=None)
@given(nonsingular_matrices(2, bound=3))
def test_failed_2x2_criterion_leaves_a_fixed_vector(A):
    if abs(A.det()) <= 1 or check_C3_2x2(A):
        return
    v = eigenvector_pm1(A, 1) or eigenvector_pm1(A, -1)
    assert v is not None and any(v)
    for L in intersection_chain(A, 5):
        assert lattice_member(v, L)
    indices = [abs(L.det()) for L in intersection_chain(A, 5)]
    assert indices == sorted(indices)


@settings(max_examples=60, deadline=None)
@given(st.lists(nonsingular_matrices(2, bound=3), min_size=1, max_size=4))
def test_determinant_is_multiplicative(mats):
    prod = I2
    d = 1
    for m in mats:
        prod = prod @ m
        d *= abs(m.det())
    assert abs(prod.det()) == d


def test_spec_validation():
    with pytest.raises(ValueError):
        SystemSpec(2, ([[1, 2], [2, 4]],), Family.GENERAL)
    with pytest.raises(ValueError):
        SystemSpec(2, (A_EX, B_EX), Family.SINGLE_MATRIX)
    assert SystemSpec.single(A_EX).in_P(A_EX @ A_EX)
    assert not SystemSpec.single(A_EX).in_P(B_EX)
    assert not SystemSpec.single(A_EX).in_P(RationalMatrix(A_EX).inverse())
