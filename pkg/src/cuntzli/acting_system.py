"""Acting systems ``(Q^n ⋊ H, Z^n)`` with H ⊂ GL_n(Q) and P = H ∩ M_n(Z).

A system is described by a family tag and a list of integer generators.  The
module factorizes group elements as ``a⁻¹ m b``, searches for common
multiples in P, and checks the standing conditions on P (reversibility,
finite index, trivial intersection of the sublattices ``aZ^n``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

from .errors import (
    DeterminantTooSmall,
    DimensionMismatch,
    NotFactorizable,
    OreSearchFailed,
    SingularMatrix,
    WrongDimension,
)
from .exact_linalg import (
    IntegerMatrix,
    RationalMatrix,
    Vector,
    as_integer_matrix,
    as_matrix,
    common_denominator,
    exponent,
    format_matrix,
    format_vector,
    hermite_basis,
    is_integral_vector,
    lattice_intersection,
    nullspace,
    rational_vector,
    vec_add,
    vec_neg,
    vec_scale,
    zero_vector,
)


class Family(str, Enum):
    SINGLE_MATRIX = "single_matrix"
    SCALARS_PLUS_GENERATORS = "scalars_plus_generators"
    FULL_INTEGER_GL = "full_integer_GL"
    GENERAL = "general"


SCALAR_FAMILIES = (Family.SCALARS_PLUS_GENERATORS, Family.FULL_INTEGER_GL)


@dataclass(frozen=True)
class SystemSpec:
    """Dimension, monoid generators of P and the family they belong to."""

    n: int
    generators: tuple
    family: Family

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be positive")
        gens = tuple(as_integer_matrix(g) for g in self.generators)
        for g in gens:
            if g.n != self.n:
                raise DimensionMismatch(f"generator {g} does not have size {self.n}")
            if g.det() == 0:
                raise SingularMatrix(f"generator {g} is singular")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "family", Family(self.family))
        if self.family is Family.SINGLE_MATRIX and len(gens) != 1:
            raise ValueError("single_matrix family needs exactly one generator")
        if self.family is Family.GENERAL and not gens:
            raise ValueError("general family needs at least one generator")

    @classmethod
    def single(cls, A) -> "SystemSpec":
        A = as_integer_matrix(A)
        return cls(A.n, (A,), Family.SINGLE_MATRIX)

    @classmethod
    def scalars(cls, n: int, generators=()) -> "SystemSpec":
        return cls(n, tuple(generators), Family.SCALARS_PLUS_GENERATORS)

    @property
    def identity(self) -> IntegerMatrix:
        return IntegerMatrix.identity(self.n)

    @property
    def has_scalars(self) -> bool:
        return self.family in SCALAR_FAMILIES

    @property
    def word_generators(self) -> tuple:
        """Generators used for word enumeration; scalar families add 2I."""
        gens = list(self.generators)
        if self.has_scalars:
            two = IntegerMatrix.scalar(self.n, 2)
            if two not in gens:
                gens.append(two)
        return tuple(gens)

    def power_of_generator(self, h) -> int | None:
        """For single_matrix systems: e with ``A^e == h``, else None."""
        if self.family is not Family.SINGLE_MATRIX:
            return None
        return _matrix_log(self.generators[0], as_matrix(h))

    def in_P(self, a) -> bool:
        a = as_matrix(a)
        if a.n != self.n or not a.is_integral() or a.det() == 0:
            return False
        if self.family is Family.SINGLE_MATRIX:
            e = self.power_of_generator(a)
            return e is not None and e >= 0
        return True

    def describe(self) -> str:
        gens = ", ".join(format_matrix(g) for g in self.generators)
        return f"{self.family.value} n={self.n} generators=[{gens}]"


@lru_cache(maxsize=4096)
def _matrix_log(A: RationalMatrix, h: RationalMatrix, bound: int = 64) -> int | None:
    if h.n != A.n:
        return None
    dA = abs(A.det())
    dh = abs(Fraction(h.det()))
    if dA != 1:
        e, p = 0, Fraction(1)
        if dh >= 1:
            while p < dh and e <= bound:
                p *= dA
                e += 1
        else:
            while p > dh and e >= -bound:
                p /= dA
                e -= 1
        if p != dh:
            return None
        return e if A ** e == h else None
    for e in sorted(range(-bound, bound + 1), key=abs):
        if A ** e == h:
            return e
    return None


@dataclass(frozen=True)
class GroupElement:
    """The affine map ``x ↦ v + h·x``; products compose as maps."""

    v: Vector
    h: RationalMatrix

    def __post_init__(self):
        h = as_matrix(self.h)
        v = rational_vector(self.v)
        if len(v) != h.n:
            raise DimensionMismatch("translation and linear part differ in size")
        if h.det() == 0:
            raise SingularMatrix("linear part must be invertible")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "v", v)

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(zero_vector(n), IntegerMatrix.identity(n))

    @classmethod
    def translation(cls, m: Sequence) -> "GroupElement":
        return cls(tuple(m), IntegerMatrix.identity(len(m)))

    @classmethod
    def linear(cls, h) -> "GroupElement":
        h = as_matrix(h)
        return cls(zero_vector(h.n), h)

    @property
    def n(self) -> int:
        return self.h.n

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(vec_add(self.v, self.h @ other.v), self.h @ other.h)

    def inverse(self) -> "GroupElement":
        hinv = self.h.inverse()
        return GroupElement(vec_neg(hinv @ self.v), hinv)

    def __call__(self, x: Sequence) -> Vector:
        return vec_add(self.v, self.h @ x)

    def is_identity(self) -> bool:
        return not any(self.v) and self.h.is_identity()

    def __str__(self):
        return f"({format_vector(self.v)};{format_matrix(self.h)})"


@dataclass(frozen=True)
class Factorization:
    """``g = a⁻¹ m b``: as affine maps, ``x ↦ a⁻¹(m + b·x)``."""

    a: IntegerMatrix
    m: Vector
    b: IntegerMatrix

    def group_element(self) -> GroupElement:
        ainv = self.a.inverse()
        return GroupElement(ainv @ self.m, ainv @ self.b)

    def inverse(self) -> "Factorization":
        return Factorization(self.b, vec_neg(self.m), self.a)


def factorize(g: GroupElement, spec: SystemSpec, depth: int = 64) -> Factorization:
    """Canonical factorization ``g = a⁻¹ m b`` with a, b in P and m integral.

    Scalar families use the smallest ``a = kI`` clearing all denominators.
    The single-matrix family uses the smallest power of the generator.
    """
    if g.n != spec.n:
        raise DimensionMismatch(f"group element of size {g.n} for a rank-{spec.n} system")
    return _factorize(g, spec, depth)


@lru_cache(maxsize=65536)
def _factorize(g: GroupElement, spec: SystemSpec, depth: int) -> Factorization:
    n = spec.n
    if spec.has_scalars:
        k = common_denominator(list(g.v) + [x for r in g.h.rows for x in r])
        a = IntegerMatrix.scalar(n, k)
        return Factorization(a, vec_scale(k, g.v), as_integer_matrix(g.h.scale(k)))
    if spec.family is Family.SINGLE_MATRIX:
        A = spec.generators[0]
        e = spec.power_of_generator(g.h)
        if e is None:
            raise NotFactorizable(f"linear part {format_matrix(g.h)} is not a power of {format_matrix(A)}")
        for j in range(max(0, -e), max(0, -e) + depth + 1):
            Aj = A ** j
            m = Aj @ g.v
            if is_integral_vector(m):
                return Factorization(as_integer_matrix(Aj), m, as_integer_matrix(A ** (j + e)))
        raise NotFactorizable(f"no power of {format_matrix(A)} up to {depth} clears {format_vector(g.v)}")
    for _, a in words(spec.word_generators, min(depth, 6)):
        m = a @ g.v
        b = a @ g.h
        if is_integral_vector(m) and b.is_integral():
            return Factorization(a, m, as_integer_matrix(b))
    raise NotFactorizable(f"no generator word up to length {min(depth, 6)} factorizes {g}")


def words(generators: Sequence[IntegerMatrix], depth: int):
    """Yield ``(word, product)`` for words of length ≤ depth.

    Shorter words first, lexicographic in generator index within a length.
    The empty word (identity) comes first.
    """
    if not generators:
        return
    n = generators[0].n
    yield (), IntegerMatrix.identity(n)
    for length in range(1, depth + 1):
        for word in itertools.product(range(len(generators)), repeat=length):
            prod = generators[word[0]]
            for i in word[1:]:
                prod = prod @ generators[i]
            yield word, prod


def generator_products(spec: SystemSpec, length: int) -> list[IntegerMatrix]:
    """Distinct products of at most ``length`` generators, in word order."""
    seen = {}
    for _, p in words(spec.generators, length):
        seen.setdefault(p, None)
    return list(seen)


def ore_witness(a, b, spec: SystemSpec, depth: int = 4, side: str = "right"):
    """Common multiple in P.

    ``side="right"``: ``(α, β)`` with ``a·α == b·β``.
    ``side="left"``: ``(α, β)`` with ``α·a == β·b``.

    Raises OreSearchFailed when nothing is found up to ``depth``; that is
    inconclusive rather than a proof that no witness exists.
    """
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    return _ore(as_integer_matrix(a), as_integer_matrix(b), spec, depth, side == "right")


@lru_cache(maxsize=65536)
def _ore(a: IntegerMatrix, b: IntegerMatrix, spec: SystemSpec, depth: int, right: bool):
    n = spec.n
    I = IntegerMatrix.identity(n)
    if a == b:
        return I, I
    if spec.family is Family.SINGLE_MATRIX:
        A = spec.generators[0]
        i, j = spec.power_of_generator(a), spec.power_of_generator(b)
        if i is not None and j is not None and i >= 0 and j >= 0:
            top = max(i, j)
            return A ** (top - i), A ** (top - j)
    ainv, binv = a.inverse(), b.inverse()
    q = ainv @ b if right else b @ ainv
    if spec.in_P(q):
        return q, I
    q = binv @ a if right else a @ binv
    if spec.in_P(q):
        return I, q
    if a @ b == b @ a:
        return b, a
    if spec.has_scalars:
        d = lcm(exponent(a), exponent(b))
        return ainv.scale(d), binv.scale(d)
    found = {}
    for _, beta in words(spec.word_generators, depth):
        key = b @ beta if right else beta @ b
        found.setdefault(key, beta)
    for _, alpha in words(spec.word_generators, depth):
        key = a @ alpha if right else alpha @ a
        if key in found:
            return alpha, found[key]
    raise OreSearchFailed(a, b, depth)


# Condition checkers --------------------------------------------------------


class Verdict(str, Enum):
    HOLDS = "Holds"
    HOLDS_BY_SCALARS = "HoldsByScalars"
    INCONCLUSIVE = "Inconclusive"
    DILATION_CERTIFIED = "DilationCertified"
    SCALARS_CERTIFIED = "ScalarsCertified"
    EIGENVALUE_OBSTRUCTION = "EigenvalueObstruction"


@dataclass(frozen=True)
class CheckResult:
    verdict: Verdict
    certificate: dict = field(default_factory=dict, compare=False)

    def __str__(self):
        return self.verdict.value


def check_C1(spec: SystemSpec, depth: int = 3) -> CheckResult:
    """Reversibility of P: left and right common multiples for generator pairs."""
    if spec.has_scalars:
        return CheckResult(Verdict.HOLDS_BY_SCALARS, {"reason": "positive scalars are central in P"})
    witnesses = {}
    for i, j in itertools.combinations(range(len(spec.generators)), 2):
        a, b = spec.generators[i], spec.generators[j]
        try:
            witnesses[(i, j)] = (
                ore_witness(a, b, spec, depth, "right"),
                ore_witness(a, b, spec, depth, "left"),
            )
        except OreSearchFailed as exc:
            return CheckResult(Verdict.INCONCLUSIVE, {"pair": (i, j), "depth": exc.depth})
    return CheckResult(Verdict.HOLDS, {"witnesses": witnesses})


@dataclass(frozen=True)
class IndexCertificate:
    holds: bool
    indices: tuple
    degenerate: tuple

    def __bool__(self):
        return self.holds


def check_C2(spec: SystemSpec) -> IndexCertificate:
    """Finite index of ``aZ^n``: the index is ``|det a|``; index 1 is flagged."""
    indices = tuple(abs(g.det()) for g in spec.generators)
    return IndexCertificate(
        holds=all(d > 0 for d in indices),
        indices=indices,
        degenerate=tuple(i for i, d in enumerate(indices) if d == 1),
    )


def char_poly_2x2_at(A, x) -> int:
    A = as_matrix(A)
    return x * x - A.trace() * x + A.det()


def check_C3_2x2(A) -> bool:
    """For 2x2 integer A with ``|det A| > 1``: true iff neither 1 nor −1 is an eigenvalue."""
    A = as_integer_matrix(A)
    if A.n != 2:
        raise WrongDimension(f"expected a 2x2 matrix, got size {A.n}")
    if abs(A.det()) <= 1:
        raise DeterminantTooSmall(f"|det| = {abs(A.det())} must exceed 1")
    return char_poly_2x2_at(A, 1) != 0 and char_poly_2x2_at(A, -1) != 0


def eigenvector_pm1(A, sign: int) -> Vector | None:
    """A primitive integer vector v with ``A v == sign·v``, if any."""
    A = as_matrix(A)
    M = A - RationalMatrix.scalar(A.n, sign)
    basis = nullspace(M.rows)
    return basis[0] if basis else None


def common_pm1_eigenvector(generators: Sequence) -> tuple | None:
    """Integer v and signs with ``g_i v == ε_i v`` for every generator."""
    n = generators[0].n
    for signs in itertools.product((1, -1), repeat=len(generators)):
        rows = []
        for g, s in zip(generators, signs):
            rows.extend((as_matrix(g) - RationalMatrix.scalar(n, s)).rows)
        basis = nullspace(rows, n)
        if basis:
            return basis[0], signs
    return None


def is_dilation(A) -> tuple[bool, bool]:
    """Whether every eigenvalue has modulus > 1, and whether the answer is exact."""
    A = as_matrix(A)
    if A.n == 1:
        return abs(A[0, 0]) > 1, True
    if A.n == 2:
        t, d = A.trace(), A.det()
        return abs(d) > 1 and abs(t) < abs(d + 1), True
    import numpy as np

    eig = np.linalg.eigvals(np.array([[float(x) for x in r] for r in A.rows]))
    return bool(np.min(np.abs(eig)) > 1 + 1e-9), False


def check_C3_sufficient(spec: SystemSpec, depth: int = 3) -> CheckResult:
    """Sufficient tests for ``∩_{a∈P} aZ^n = {0}`` and a matching obstruction."""
    if spec.has_scalars:
        return CheckResult(Verdict.SCALARS_CERTIFIED, {"reason": "∩ kZ^n = {0} over scalars k ≥ 2"})
    obstruction = common_pm1_eigenvector(spec.generators)
    if obstruction is not None:
        v, signs = obstruction
        return CheckResult(Verdict.EIGENVALUE_OBSTRUCTION, {"vector": v, "signs": signs})
    results = [is_dilation(g) for g in spec.generators]
    if all(ok for ok, _ in results):
        mode = "exact" if all(ex for _, ex in results) else "numeric"
        return CheckResult(Verdict.DILATION_CERTIFIED, {"mode": mode})
    return CheckResult(Verdict.INCONCLUSIVE, {"depth": depth})


def check_effective(h) -> bool:
    """A linear map fixes every point of Z^n only if it is the identity."""
    h = as_matrix(h)
    if h.det() == 0:
        raise SingularMatrix(f"{h} is singular")
    return not h.is_identity()


def intersection_chain(A, R: int) -> list[IntegerMatrix]:
    """Hermite bases of ``L_r = ∩_{j≤r} A^j Z^n`` for r = 0..R."""
    A = as_integer_matrix(A)
    if A.det() == 0:
        raise SingularMatrix(f"{A} is singular")
    chain = [hermite_basis(IntegerMatrix.identity(A.n))]
    power = IntegerMatrix.identity(A.n)
    for _ in range(R):
        power = power @ A
        chain.append(lattice_intersection(chain[-1], power))
    return chain
