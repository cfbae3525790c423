"""Brute-force oracle: elements of T as partial bijections of Z^n × H.

Basis points are pairs ``(n, h)``.  The basic operators act by

* ``S_a``:  ``(n, h) ↦ (A n, a h)``
* ``S_a*``: ``(n, h) ↦ (A⁻¹ n, a⁻¹ h)`` when ``A⁻¹ n`` is integral
* ``U(m)``: ``(n, h) ↦ (n + m, h)``

and a projection is the partial identity on its cosets.  Coset membership
here goes through Hermite reduction rather than the Smith-based reduction
used by the symbolic code, so the two sides share as little as possible.
Every operator is a product of a map on Z^n and a map on H, which lets a
window (box × finite subset of H) be checked one factor at a time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .acting_system import SystemSpec, factorize
from .exact_linalg import (
    IntegerMatrix,
    RationalMatrix,
    Vector,
    as_integer_matrix,
    column_hermite,
    format_matrix,
    format_vector,
    quotient_group,
)
from .inverse_semigroup import Projection, TElement


@dataclass(frozen=True)
class BasisPoint:
    n_part: Vector
    h_part: RationalMatrix

    def __str__(self):
        return f"({format_vector(self.n_part)};{format_matrix(self.h_part)})"


@dataclass(frozen=True)
class S:
    a: IntegerMatrix


@dataclass(frozen=True)
class SStar:
    a: IntegerMatrix


@dataclass(frozen=True)
class U:
    m: Vector


@dataclass(frozen=True)
class Proj:
    f: Projection


@lru_cache(maxsize=4096)
def _adjugate(a: IntegerMatrix):
    det = a.det()
    adj = a.inverse().scale(det)
    return adj.rows, det


@lru_cache(maxsize=4096)
def _hermite_columns(C: IntegerMatrix):
    H, _ = column_hermite(C.rows)
    n = C.n
    return tuple(tuple(H[r][c] for r in range(n)) for c in range(n))


def hermite_reduce(v: Sequence[int], C: IntegerMatrix) -> Vector:
    """Canonical representative of ``v + C Z^n`` via the lower-triangular Hermite basis."""
    cols = _hermite_columns(C)
    v = list(v)
    for i, col in enumerate(cols):
        q = v[i] // col[i]
        if q:
            for r in range(i, len(v)):
                v[r] -= q * col[r]
    return tuple(v)


@lru_cache(maxsize=65536)
def _projection_domain(f: Projection) -> frozenset:
    return frozenset(hermite_reduce(k, f.level) for k in f.cosets)


def in_projection(n: Sequence[int], f: Projection) -> bool:
    return hermite_reduce(n, f.level) in _projection_domain(f)


def _matvec(rows, v):
    return tuple(sum(x * y for x, y in zip(r, v)) for r in rows)


def apply_n(op, n: Vector) -> Vector | None:
    """The Z^n factor of a basic operator; None where undefined."""
    if isinstance(op, S):
        return _matvec(op.a.rows, n)
    if isinstance(op, U):
        return tuple(x + y for x, y in zip(n, op.m))
    if isinstance(op, SStar):
        adj, det = _adjugate(op.a)
        w = _matvec(adj, n)
        if any(x % det for x in w):
            return None
        return tuple(x // det for x in w)
    if isinstance(op, Proj):
        return n if in_projection(n, op.f) else None
    raise TypeError(f"unknown operator {op!r}")


@lru_cache(maxsize=65536)
def apply_h(op, h: RationalMatrix) -> RationalMatrix:
    """The H factor of a basic operator (always defined)."""
    if isinstance(op, S):
        return op.a @ h
    if isinstance(op, SStar):
        return op.a.inverse() @ h
    return h


def apply_basic(op, p: BasisPoint) -> BasisPoint | None:
    n = apply_n(op, p.n_part)
    if n is None:
        return None
    return BasisPoint(n, apply_h(op, p.h_part))


def apply_ops(ops: Sequence, p: BasisPoint) -> BasisPoint | None:
    """Apply an operator product; the rightmost factor acts first."""
    for op in reversed(ops):
        if p is None:
            return None
        p = apply_basic(op, p)
    return p


def operator_word(t: TElement, spec: SystemSpec) -> tuple:
    """``E · s_a* · u(m) · s_b`` for the canonical factorization of the germ."""
    if t.is_zero():
        return (Proj(t.range_proj),)
    fac = factorize(t.germ, spec)
    return (Proj(t.range_proj), SStar(fac.a), U(fac.m), S(fac.b))


def apply_t(t: TElement, p: BasisPoint, spec: SystemSpec) -> BasisPoint | None:
    return apply_ops(operator_word(t, spec), p)


def apply_t_n(t: TElement, n: Vector, spec: SystemSpec) -> Vector | None:
    for op in reversed(operator_word(t, spec)):
        n = apply_n(op, n)
        if n is None:
            return None
    return n


def apply_t_h(t: TElement, h: RationalMatrix, spec: SystemSpec) -> RationalMatrix:
    for op in reversed(operator_word(t, spec)):
        h = apply_h(op, h)
    return h


# Windows -------------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """All ``(n, h)`` with ``|n_i| ≤ n_box`` and h from a finite list."""

    n_box: int
    h_elements: tuple

    @classmethod
    def build(cls, spec: SystemSpec, bound: int = 8, word_length: int = 3) -> "Window":
        letters = []
        for g in spec.word_generators:
            letters.extend([g, g.inverse()])
        seen = {}
        I = IntegerMatrix.identity(spec.n)
        seen[I] = None
        for length in range(1, word_length + 1):
            for word in itertools.product(letters, repeat=length):
                h = I
                for x in word:
                    h = h @ x
                seen.setdefault(h, None)
        return cls(bound, tuple(seen))

    @property
    def n(self) -> int:
        return self.h_elements[0].n

    def n_points(self):
        return itertools.product(range(-self.n_box, self.n_box + 1), repeat=self.n)

    def points(self):
        for n in self.n_points():
            for h in self.h_elements:
                yield BasisPoint(n, h)

    def __len__(self):
        return (2 * self.n_box + 1) ** self.n * len(self.h_elements)


def default_window(spec: SystemSpec) -> Window:
    return Window.build(spec, 8, 3)


def _fmt(p):
    return "undefined" if p is None else str(p)


def verify_cuntz_li(spec: SystemSpec, a, w: Window) -> list[str]:
    """Check the defining relations pointwise on a window; returns violation lines."""
    a = as_integer_matrix(a)
    n = spec.n
    report = []

    def expect(name, point, expected, got):
        if expected != got:
            report.append(f"VIOLATION {name} {point} {_fmt(expected)} {_fmt(got)}")

    reps = quotient_group(a).elements()
    e_a = (S(a), SStar(a))
    partition = [(U(k),) + e_a + (U(tuple(-x for x in k)),) for k in reps]
    units = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    shifts = units + [tuple(-x for x in e) for e in units] + [tuple(3 for _ in range(n))]
    # (label, expected operator product, tested operator product)
    relations = [("s_a*s_a", (), (SStar(a), S(a)))]
    for b in spec.word_generators:
        relations.append((f"s_as_b[{format_matrix(b)}]", (S(a @ b),), (S(a), S(b))))
    for m in shifts:
        tag = format_vector(m)
        relations.append((f"s_au(m)[{tag}]", (U(a @ m), S(a)), (S(a), U(m))))
        relations.append((f"covariance[{tag}]", (U(a @ m),) + e_a, (S(a), U(m), SStar(a))))
        for m2 in units:
            total = tuple(x + y for x, y in zip(m, m2))
            relations.append((f"u(m)u(n)[{tag},{format_vector(m2)}]", (U(total),), (U(m), U(m2))))
    for p in w.points():
        hits = sum(1 for ops in partition if apply_ops(ops, p) is not None)
        if hits != 1:
            report.append(f"VIOLATION partition {p} 1 {hits}")
        in_range = not any(hermite_reduce(p.n_part, a))
        expect("s_as_a*", p, p if in_range else None, apply_ops(e_a, p))
        for name, lhs, rhs in relations:
            expect(name, p, apply_ops(lhs, p), apply_ops(rhs, p))
    return report


def oracle_equal(t1: TElement, t2: TElement, w: Window, spec: SystemSpec) -> bool:
    """Agreement of the two partial maps on every window point (definedness included)."""
    return not window_differences(lambda n: apply_t_n(t1, n, spec), lambda n: apply_t_n(t2, n, spec), t1, t2, w, spec)


def window_differences(left_n, right_n, t_left, t_right, w: Window, spec: SystemSpec, limit: int = 1):
    """Points where two partial maps disagree, using the product structure of the window.

    ``left_n`` / ``right_n`` are the Z^n factors; the H factors come from the
    given elements (or sequences of elements, composed right to left).
    """
    diffs = []
    hs_left = [_h_factor(t_left, h, spec) for h in w.h_elements]
    hs_right = [_h_factor(t_right, h, spec) for h in w.h_elements]
    for n in w.n_points():
        x, y = left_n(n), right_n(n)
        if x != y:
            diffs.append((BasisPoint(n, w.h_elements[0]), x, y))
        elif x is not None and hs_left != hs_right:
            i = next(i for i, (p, q) in enumerate(zip(hs_left, hs_right)) if p != q)
            diffs.append((BasisPoint(n, w.h_elements[i]), hs_left[i], hs_right[i]))
        if len(diffs) >= limit:
            break
    return diffs


def _h_factor(t, h, spec):
    if isinstance(t, TElement):
        return apply_t_h(t, h, spec)
    for s in reversed(list(t)):
        h = apply_t_h(s, h, spec)
    return h


def compose_n(elements: Iterable[TElement], spec: SystemSpec):
    """Z^n factor of an operator product (rightmost acts first)."""
    elements = list(elements)

    def run(n):
        for t in reversed(elements):
            n = apply_t_n(t, n, spec)
            if n is None:
                return None
        return n

    return run


def check_product(t1: TElement, t2: TElement, product: TElement, w: Window, spec: SystemSpec) -> list[str]:
    """Compare a symbolic product with the composite partial map on the window."""
    diffs = window_differences(
        lambda n: apply_t_n(product, n, spec),
        compose_n([t1, t2], spec),
        product,
        [t1, t2],
        w,
        spec,
    )
    return [f"VIOLATION t_mul {p} {_fmt(got)} {_fmt(exp)}" for p, exp, got in diffs]
