"""Number-field matrices, trace forms, transpose intertwiners and Q/Z pairings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .acting_system import SystemSpec, generator_products, intersection_chain
from .errors import NoIntertwiner, NotAssociative, NotCommutative, SingularMatrix
from .exact_linalg import (
    IntegerMatrix,
    RationalMatrix,
    Vector,
    as_integer_matrix,
    as_matrix,
    dot,
    format_matrix,
    format_vector,
    is_integral_vector,
    lattice_member,
    nullspace,
    rational_vector,
)


@dataclass(frozen=True)
class NumberFieldData:
    """Structure constants ``w_i w_j = Σ_k table[i][j][k] w_k`` of a Z-basis."""

    n: int
    mult_table: tuple
    one: Vector

    def multiply(self, x: Sequence, y: Sequence) -> Vector:
        out = [Fraction(0)] * self.n
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                for k, c in enumerate(self.mult_table[i][j]):
                    out[k] += xi * yj * c
        return rational_vector(out)

    def alpha(self, x: Sequence) -> RationalMatrix:
        """Matrix of multiplication by x: column j holds the coordinates of ``x·w_j``."""
        n = self.n
        return RationalMatrix(
            [[sum(x[i] * self.mult_table[i][j][k] for i in range(n)) for j in range(n)] for k in range(n)]
        )

    def basis(self, i: int) -> Vector:
        return tuple(int(i == j) for j in range(self.n))


def build_alpha(mult_table) -> NumberFieldData:
    """Validate a multiplication table and return the field data.

    Raises NotCommutative / NotAssociative with the offending basis indices,
    and ValueError when there is no unit element.
    """
    table = tuple(tuple(rational_vector(c) for c in row) for row in mult_table)
    n = len(table)
    if any(len(row) != n or any(len(c) != n for c in row) for row in table):
        raise ValueError("multiplication table must be n x n x n")
    for i, j in itertools.combinations(range(n), 2):
        if table[i][j] != table[j][i]:
            raise NotCommutative((i, j))
    probe = NumberFieldData(n, table, (0,) * n)
    e = [probe.basis(i) for i in range(n)]
    for i, j, k in itertools.product(range(n), repeat=3):
        if probe.multiply(probe.multiply(e[i], e[j]), e[k]) != probe.multiply(e[i], probe.multiply(e[j], e[k])):
            raise NotAssociative((i, j, k))
    one = _unit(probe)
    return NumberFieldData(n, table, one)


def _unit(nf: NumberFieldData) -> Vector:
    # u with u·w_j = w_j for all j: Σ_i u_i table[i][j][k] = δ_jk, linear in u.
    n = nf.n
    rows, rhs = [], []
    for j in range(n):
        for k in range(n):
            rows.append([nf.mult_table[i][j][k] for i in range(n)])
            rhs.append(int(j == k))
    augmented = [r + [-b] for r, b in zip(rows, rhs)]
    for v in nullspace(augmented, n + 1):
        if v[n]:
            return rational_vector(Fraction(x, v[n]) for x in v[:n])
    raise ValueError("multiplication table has no unit element")


def trace(nf: NumberFieldData, x: Sequence):
    return nf.alpha(x).trace()


@dataclass(frozen=True)
class TraceForm:
    X: RationalMatrix

    @property
    def discriminant(self):
        return self.X.det()


def trace_form(nf: NumberFieldData) -> TraceForm:
    """``X_ij = Tr α(w_i w_j)``."""
    e = [nf.basis(i) for i in range(nf.n)]
    X = RationalMatrix([[trace(nf, nf.multiply(e[i], e[j])) for j in range(nf.n)] for i in range(nf.n)])
    if X.det() == 0:
        raise SingularMatrix("trace form is degenerate")
    return TraceForm(X)


def verify_discriminant_lemma(nf: NumberFieldData, samples: Iterable[Sequence]) -> list[str]:
    """``X α(a) == α(a)ᵗ X`` for each sample; returns violation lines."""
    X = trace_form(nf).X
    report = []
    for a in samples:
        A = nf.alpha(a)
        lhs, rhs = X @ A, A.T @ X
        if lhs != rhs:
            report.append(
                f"VIOLATION discriminant {format_vector(tuple(a))} {format_matrix(rhs)} {format_matrix(lhs)}"
            )
    return report


def find_intertwiner(A) -> IntegerMatrix:
    """Integer X with ``det X ≠ 0`` and ``X A == Aᵗ X``.

    Solves the linear system ``Y A − Aᵗ Y = 0`` exactly and scans its
    nullspace basis in order, then pairwise sums, for a nonsingular element.
    """
    A = as_matrix(A)
    n = A.n
    rows = []
    for i, j in itertools.product(range(n), repeat=2):
        row = [0] * (n * n)
        for k in range(n):
            row[i * n + k] += A[k, j]
            row[k * n + j] -= A[k, i]
        rows.append(row)
    basis = nullspace(rows, n * n)
    candidates = itertools.chain(
        basis,
        (tuple(x + y for x, y in zip(u, v)) for u, v in itertools.combinations(basis, 2)),
    )
    for v in candidates:
        Y = IntegerMatrix([v[i * n : (i + 1) * n] for i in range(n)])
        if Y.det() != 0:
            return Y
    raise NoIntertwiner(f"no nonsingular solution of X·A = Aᵗ·X for {format_matrix(A)}")


def transpose_c3_transfer(A, X=None, R: int = 5) -> list[str]:
    """Check ``X A^r == (Aᵗ)^r X`` and ``X·L_R(A) ⊆ L_R(Aᵗ)``; returns violation lines."""
    A = as_integer_matrix(A)
    X = find_intertwiner(A) if X is None else as_integer_matrix(X)
    report = []
    if X @ A != A.T @ X:
        report.append(f"VIOLATION intertwiner {format_matrix(X)} {format_matrix(A.T @ X)} {format_matrix(X @ A)}")
    for r in range(R + 1):
        lhs, rhs = X @ A ** r, A.T ** r @ X
        if lhs != rhs:
            report.append(f"VIOLATION power r={r} {format_matrix(rhs)} {format_matrix(lhs)}")
    L = intersection_chain(A, R)[-1]
    LT = intersection_chain(A.T, R)[-1]
    for col in L.columns():
        image = X @ col
        if not lattice_member(image, LT):
            report.append(f"VIOLATION inclusion {format_vector(col)} member {format_vector(image)}")
    return report


@dataclass(frozen=True, order=True)
class PhaseQ:
    """An element of Q/Z, stored in [0, 1)."""

    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        object.__setattr__(self, "value", v - (v.numerator // v.denominator))

    def __add__(self, other: "PhaseQ") -> "PhaseQ":
        return PhaseQ(self.value + other.value)

    def __neg__(self) -> "PhaseQ":
        return PhaseQ(-self.value)

    def __sub__(self, other: "PhaseQ") -> "PhaseQ":
        return PhaseQ(self.value - other.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self):
        return str(self.value)


def pairing(x: Sequence, z: Sequence) -> PhaseQ:
    """``⟨x, z⟩`` modulo 1."""
    return PhaseQ(Fraction(dot(rational_vector(x), rational_vector(z))))


def default_test_set(spec: SystemSpec, levels: int = 4) -> list[Vector]:
    """``γ⁻¹ e_i`` for the standard basis and γ running through products of generators."""
    out = {}
    n = spec.n
    for gamma in generator_products(spec, levels):
        ginv = gamma.inverse()
        for i in range(n):
            out.setdefault(ginv @ tuple(int(i == j) for j in range(n)), None)
    return list(out)


def psi_kernel_check(xi: Sequence, z: Sequence, spec: SystemSpec, test_set=None) -> bool:
    """True iff ``χ_ξ(t) χ_{−z}(t) = 1`` for every t in the test set."""
    xi, z = rational_vector(xi), rational_vector(z)
    if test_set is None:
        test_set = default_test_set(spec)
    diff = tuple(a - b for a, b in zip(xi, z))
    return all(pairing(t, diff).is_zero() for t in test_set)


def kernel_witness(xi: Sequence, z: Sequence, spec: SystemSpec, levels: int = 8) -> Vector | None:
    """A test point with nonzero phase, searching levels in increasing order."""
    diff = tuple(a - b for a, b in zip(rational_vector(xi), rational_vector(z)))
    for t in default_test_set(spec, levels):
        if not pairing(t, diff).is_zero():
            return t
    return None


def converse_holds(xi: Sequence, z: Sequence, gamma) -> bool:
    """``(γᵗ)⁻¹(ξ − z) ∈ Z^n``: the pairing with all of ``γ⁻¹ Z^n`` is trivial."""
    gamma = as_matrix(gamma)
    diff = tuple(a - b for a, b in zip(rational_vector(xi), rational_vector(z)))
    return is_integral_vector(gamma.T.inverse() @ diff)


# Shipped fields ----------------------------------------------------------


def _table(n, products):
    t = [[[0] * n for _ in range(n)] for _ in range(n)]
    for (i, j), v in products.items():
        t[i][j] = list(v)
        t[j][i] = list(v)
    return t


SQRT2 = _table(2, {(0, 0): (1, 0), (0, 1): (0, 1), (1, 1): (2, 0)})
GAUSSIAN = _table(2, {(0, 0): (1, 0), (0, 1): (0, 1), (1, 1): (-1, 0)})
CUBE_ROOT2 = _table(
    3,
    {
        (0, 0): (1, 0, 0),
        (0, 1): (0, 1, 0),
        (0, 2): (0, 0, 1),
        (1, 1): (0, 0, 1),
        (1, 2): (2, 0, 0),
        (2, 2): (0, 2, 0),
    },
)

FIELDS = {"sqrt2": SQRT2, "gaussian": GAUSSIAN, "cuberoot2": CUBE_ROOT2}
