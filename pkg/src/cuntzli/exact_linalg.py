"""Exact integer and rational linear algebra.

Matrices are immutable square arrays of Python ints / ``Fraction``s.  Vectors
are plain tuples.  Nothing here ever touches floating point: Smith and
Hermite reductions overflow fixed-width integers almost immediately.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch, SingularMatrix

Vector = tuple


def _norm(x):
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        x = Fraction(x)
    elif not isinstance(x, Fraction):
        x = Fraction(x)
    return int(x) if x.denominator == 1 else x


def rational_vector(entries: Iterable) -> Vector:
    """Normalize entries to ints / reduced Fractions."""
    return tuple(_norm(x) for x in entries)


def integer_vector(entries: Iterable) -> Vector:
    v = rational_vector(entries)
    if not is_integral_vector(v):
        raise ValueError(f"vector {v} is not integral")
    return v


def is_integral_vector(v: Sequence) -> bool:
    return all(isinstance(x, int) for x in v)


def zero_vector(n: int) -> Vector:
    return (0,) * n


def vec_add(u: Sequence, v: Sequence) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatch(f"vectors of length {len(u)} and {len(v)}")
    return tuple(_norm(a + b) for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatch(f"vectors of length {len(u)} and {len(v)}")
    return tuple(_norm(a - b) for a, b in zip(u, v))


def vec_neg(v: Sequence) -> Vector:
    return tuple(-x for x in v)


def vec_scale(k, v: Sequence) -> Vector:
    return tuple(_norm(k * x) for x in v)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise DimensionMismatch(f"vectors of length {len(u)} and {len(v)}")
    return _norm(sum(a * b for a, b in zip(u, v)))


def common_denominator(v: Sequence) -> int:
    d = 1
    for x in v:
        if isinstance(x, Fraction):
            d = d * x.denominator // gcd(d, x.denominator)
    return d


class RationalMatrix:
    """Immutable n x n matrix with exact rational entries."""

    __slots__ = ("_rows", "_hash")

    def __init__(self, rows):
        if isinstance(rows, RationalMatrix):
            rows = rows._rows
        rows = tuple(tuple(_norm(x) for x in r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square and non-empty")
        self._rows = rows
        self._hash = None
        self._validate()

    def _validate(self):
        pass

    # construction helpers
    @classmethod
    def identity(cls, n: int):
        return _make([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, n: int, k):
        return _make([[k if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries):
        n = len(entries)
        return _make([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols):
        n = len(cols)
        return _make([[cols[j][i] for j in range(n)] for i in range(n)])

    # basic access
    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple:
        return self._rows

    def columns(self) -> tuple:
        return tuple(zip(*self._rows))

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def tolist(self) -> list:
        return [list(r) for r in self._rows]

    def __eq__(self, other):
        if isinstance(other, RationalMatrix):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self):
        return f"{type(self).__name__}({self.tolist()})"

    def __str__(self):
        return format_matrix(self)

    # arithmetic
    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if other.n != self.n:
                raise DimensionMismatch(f"{self.n}x{self.n} @ {other.n}x{other.n}")
            cols = other.columns()
            return _make([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows])
        v = tuple(other)
        if len(v) != self.n:
            raise DimensionMismatch(f"matrix of size {self.n} applied to vector of length {len(v)}")
        return tuple(_norm(sum(a * b for a, b in zip(r, v))) for r in self._rows)

    def __add__(self, other):
        return _make([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other):
        return _make([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __neg__(self):
        return _make([[-a for a in r] for r in self._rows])

    def scale(self, k):
        return _make([[k * a for a in r] for r in self._rows])

    @property
    def T(self):
        return _make(list(zip(*self._rows)))

    def trace(self):
        return _norm(sum(self._rows[i][i] for i in range(self.n)))

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for r in self._rows for x in r)

    def is_identity(self) -> bool:
        return self == RationalMatrix.identity(self.n)

    def det(self):
        return _det(self._rows)

    def inverse(self) -> "RationalMatrix":
        return _make(_inverse(self._rows))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = RationalMatrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def solve(self, b: Sequence) -> Vector:
        """Exact solution of ``self @ x == b``."""
        return self.inverse() @ b


class IntegerMatrix(RationalMatrix):
    """RationalMatrix whose entries are all integers."""

    __slots__ = ()

    def _validate(self):
        if not all(isinstance(x, int) for r in self._rows for x in r):
            raise ValueError("IntegerMatrix entries must be integers")


def _make(rows) -> RationalMatrix:
    rows = tuple(tuple(_norm(x) for x in r) for r in rows)
    if all(isinstance(x, int) for r in rows for x in r):
        return IntegerMatrix(rows)
    return RationalMatrix(rows)


def as_matrix(obj) -> RationalMatrix:
    """Coerce a nested list, scalar (n=1) or matrix into the narrowest matrix type."""
    if isinstance(obj, RationalMatrix):
        return obj
    if isinstance(obj, (int, Fraction, str)):
        return _make([[obj]])
    return _make(obj)


def as_integer_matrix(obj) -> IntegerMatrix:
    m = as_matrix(obj)
    if not isinstance(m, IntegerMatrix):
        raise ValueError(f"{m} is not an integer matrix")
    return m


def format_scalar(x) -> str:
    return str(x)


def format_vector(v: Sequence) -> str:
    if len(v) == 1:
        return format_scalar(v[0])
    return "[" + ",".join(format_scalar(x) for x in v) + "]"


def format_matrix(m: RationalMatrix) -> str:
    if m.n == 1:
        return format_scalar(m[0, 0])
    return "[" + ",".join("[" + ",".join(format_scalar(x) for x in r) + "]" for r in m.rows) + "]"


def _det(rows):
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return _norm(det)


def _inverse(rows):
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise SingularMatrix("matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [r[n:] for r in a]


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of the rational right kernel of a (possibly rectangular) matrix.

    Basis vectors come from the reduced row echelon form, one per free
    column in increasing column order, each scaled to a primitive integer
    vector.
    """
    a = [[Fraction(x) for x in r] for r in rows]
    m = len(a)
    ncols = ncols if ncols is not None else (len(a[0]) if a else 0)
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][free]
        basis.append(primitive_integer_vector(v))
    return basis


def primitive_integer_vector(v: Sequence) -> Vector:
    """Scale a nonzero rational vector to a primitive integer vector."""
    d = common_denominator([Fraction(x) for x in v])
    w = [int(Fraction(x) * d) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    if g == 0:
        return tuple(w)
    return tuple(x // g for x in w)


# Smith normal form ---------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with U, V unimodular and d_i | d_{i+1}."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self) -> tuple:
        return tuple(self.D[i, i] for i in range(self.D.n))


def smith_normal_form(A) -> SmithDecomposition:
    """Smith normal form of a nonsingular integer matrix.

    Pivot rule: smallest nonzero absolute value in the active block, ties
    broken in row-major order.

    Raises
    ------
    SingularMatrix
        If ``det A == 0``.
    """
    A = as_integer_matrix(A)
    if A.det() == 0:
        raise SingularMatrix(f"{A} is singular")
    n = A.n
    a = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (a, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for M in (a, V):
            for r in M:
                r[dst] += k * r[src]

    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    x = a[i][j]
                    if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return SmithDecomposition(IntegerMatrix(U), IntegerMatrix(a), IntegerMatrix(V))


# Hermite normal form -------------------------------------------------------


def _xgcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def column_hermite(rows: Sequence[Sequence[int]]):
    """Column-style Hermite form of an integer matrix with full row rank.

    Returns ``(H, W)`` as nested lists with ``M @ W == H``, W unimodular,
    H = [T | 0] where T is lower triangular with positive diagonal and
    ``0 <= T[i][j] < T[i][i]`` for ``j < i``.
    """
    a = [list(r) for r in rows]
    m = len(a)
    k = len(a[0])
    W = [[int(i == j) for j in range(k)] for i in range(k)]

    def colop(i, j, x, y, u, v):
        # (col_i, col_j) <- (x col_i + y col_j, u col_i + v col_j)
        for M in (a, W):
            for r in M:
                ci, cj = r[i], r[j]
                r[i], r[j] = x * ci + y * cj, u * ci + v * cj

    for i in range(m):
        for j in range(i + 1, k):
            if a[i][j] == 0:
                continue
            p, q = a[i][i], a[i][j]
            g, x, y = _xgcd(p, q)
            colop(i, j, x, y, -q // g, p // g)
        if a[i][i] == 0:
            raise SingularMatrix("matrix does not have full row rank")
        if a[i][i] < 0:
            for M in (a, W):
                for r in M:
                    r[i] = -r[i]
        for j in range(i):
            q = a[i][j] // a[i][i]
            if q:
                for M in (a, W):
                    for r in M:
                        r[j] -= q * r[i]
    return a, W


def hermite_basis(A) -> IntegerMatrix:
    """Canonical (column Hermite) basis of the lattice ``A @ Z^n``."""
    A = as_integer_matrix(A)
    H, _ = column_hermite(A.rows)
    return IntegerMatrix(H)


def same_lattice(A, B) -> bool:
    return hermite_basis(A) == hermite_basis(B)


def lattice_contains(A, B) -> bool:
    """True iff ``B @ Z^n`` is a sublattice of ``A @ Z^n``."""
    return (as_matrix(A).inverse() @ as_matrix(B)).is_integral()


# Quotients and cosets ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuotientGroup:
    """The finite group ``Z^n / A Z^n`` presented through Smith form."""

    modulus: IntegerMatrix
    smith: SmithDecomposition
    order: int
    _U: tuple = field(repr=False)
    _Uinv: tuple = field(repr=False)
    _d: tuple = field(repr=False)

    @property
    def n(self) -> int:
        return self.modulus.n

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of ``v + A Z^n``."""
        if len(v) != self.n:
            raise DimensionMismatch(f"vector of length {len(v)} for a rank-{self.n} quotient")
        y = [sum(u * x for u, x in zip(row, v)) % d for row, d in zip(self._U, self._d)]
        return tuple(sum(u * x for u, x in zip(row, y)) for row in self._Uinv)

    def contains(self, v: Sequence[int]) -> bool:
        return all(sum(u * x for u, x in zip(row, v)) % d == 0 for row, d in zip(self._U, self._d))

    def elements(self) -> list[Vector]:
        """All canonical representatives, in Smith-coordinate product order."""
        out = []
        for y in itertools.product(*(range(d) for d in self._d)):
            out.append(tuple(sum(u * x for u, x in zip(row, y)) for row in self._Uinv))
        return out

    def coset(self, v: Sequence[int]) -> "Coset":
        return Coset(self, self.reduce(v))

    def __eq__(self, other):
        return isinstance(other, QuotientGroup) and self.modulus == other.modulus

    def __hash__(self):
        return hash(self.modulus)


@dataclass(frozen=True)
class Coset:
    parent: QuotientGroup
    rep: Vector

    def __add__(self, other: "Coset") -> "Coset":
        if self.parent != other.parent:
            raise DimensionMismatch("cosets of different quotient groups")
        return self.parent.coset(vec_add(self.rep, other.rep))

    def __neg__(self) -> "Coset":
        return self.parent.coset(vec_neg(self.rep))

    def is_zero(self) -> bool:
        return not any(self.rep)


@lru_cache(maxsize=4096)
def _quotient_group(A: IntegerMatrix) -> QuotientGroup:
    snf = smith_normal_form(A)
    d = snf.diagonal
    order = 1
    for x in d:
        order *= x
    Uinv = snf.U.inverse()
    return QuotientGroup(A, snf, order, snf.U.rows, Uinv.rows, d)


def quotient_group(A) -> QuotientGroup:
    """``Z^n / A Z^n`` with canonical representatives; order ``|det A|``."""
    return _quotient_group(as_integer_matrix(A))


def coset_reduce(v: Sequence[int], Q: QuotientGroup) -> Coset:
    v = tuple(v)
    if len(v) != Q.n:
        raise DimensionMismatch(f"vector of length {len(v)} for a rank-{Q.n} quotient")
    if not is_integral_vector(v):
        raise ValueError(f"{v} is not an integer vector")
    return Coset(Q, Q.reduce(v))


def lattice_member(v: Sequence, A) -> bool:
    """True iff ``A^{-1} v`` is integral (exact rational solve)."""
    A = as_matrix(A)
    if len(v) != A.n:
        raise DimensionMismatch(f"vector of length {len(v)} for a {A.n}x{A.n} matrix")
    if A.det() == 0:
        raise SingularMatrix(f"{A} is singular")
    return is_integral_vector(A.solve(v))


def lattice_intersection(A, B) -> IntegerMatrix:
    """Hermite basis C with ``C Z^n = A Z^n ∩ B Z^n``.

    Kernel method: the integer kernel of ``[A | -B]`` pairs (x, y) with
    ``A x == B y``; the A x parts span the intersection.
    """
    A = as_integer_matrix(A)
    B = as_integer_matrix(B)
    if A.n != B.n:
        raise DimensionMismatch("lattices of different rank")
    if A.det() == 0 or B.det() == 0:
        raise SingularMatrix("lattice generators must be nonsingular")
    n = A.n
    M = [list(A.rows[i]) + [-x for x in B.rows[i]] for i in range(n)]
    _, W = column_hermite(M)
    kernel_x = [[W[i][j] for i in range(n)] for j in range(n, 2 * n)]
    gens = [A @ x for x in kernel_x]
    return hermite_basis(RationalMatrix.from_columns(gens))


def lattice_index(A) -> int:
    return abs(as_matrix(A).det())


def exponent(A) -> int:
    """Exponent of ``Z^n / A Z^n``: the smallest k > 0 with ``k A^{-1}`` integral."""
    return smith_normal_form(A).diagonal[-1]


def box(n: int, bound: int):
    """Integer vectors with all coordinates in ``[-bound, bound]``, lexicographic."""
    return itertools.product(range(-bound, bound + 1), repeat=n)
