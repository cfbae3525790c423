"""The inverse semigroup T generated by ``s_a``, ``s_a*`` and ``u(m)``.

Projections are finite unions of cosets at an explicit level C.  A general
element is stored in the normal form ``(E, g)``: first apply the partial
map ``w_g`` (``n ↦ g(n)`` where integral), then restrict to the projection
E.  Products always mean "apply the right factor first".
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .acting_system import Factorization, GroupElement, SystemSpec, factorize, ore_witness
from .errors import DimensionMismatch
from .exact_linalg import (
    IntegerMatrix,
    Vector,
    as_integer_matrix,
    format_matrix,
    format_vector,
    quotient_group,
    vec_add,
    vec_neg,
    zero_vector,
)

ORE_DEPTH = 4


@dataclass(frozen=True)
class Projection:
    """``Σ_{k∈S} u(k) e_C u(k)*``: the partial identity on ``{n : n mod C ∈ S}``."""

    level: IntegerMatrix
    cosets: tuple

    def __post_init__(self):
        level = as_integer_matrix(self.level)
        Q = quotient_group(level)
        reps = set()
        for k in self.cosets:
            if len(k) != level.n:
                raise DimensionMismatch(f"coset {k} does not match level size {level.n}")
            reps.add(Q.reduce(tuple(k)))
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "cosets", tuple(sorted(reps)))

    @classmethod
    def one(cls, n: int) -> "Projection":
        return cls(IntegerMatrix.identity(n), (zero_vector(n),))

    @classmethod
    def zero(cls, n: int) -> "Projection":
        return cls(IntegerMatrix.identity(n), ())

    @classmethod
    def range_of(cls, level, k: Sequence[int] | None = None) -> "Projection":
        """``u(k) e_C u(k)*``; with k omitted this is ``e_C``."""
        level = as_integer_matrix(level)
        return cls(level, (tuple(k) if k is not None else zero_vector(level.n),))

    @property
    def n(self) -> int:
        return self.level.n

    def is_zero(self) -> bool:
        return not self.cosets

    def contains(self, point: Sequence[int]) -> bool:
        return quotient_group(self.level).reduce(tuple(point)) in self.cosets

    def __str__(self):
        reps = ",".join(format_vector(k) for k in self.cosets)
        return f"f[{format_matrix(self.level)};{{{reps}}}]"


def proj_refine(f: Projection, beta) -> Projection:
    """Rewrite f at level ``C·β``: each coset splits into its ``|det β|`` preimages."""
    beta = as_integer_matrix(beta)
    return _refine(f, beta)


@lru_cache(maxsize=65536)
def _refine(f: Projection, beta: IntegerMatrix) -> Projection:
    C = f.level
    lifts = [C @ t for t in quotient_group(beta).elements()]
    return Projection(C @ beta, tuple(vec_add(k, t) for k in f.cosets for t in lifts))


def common_level(f1: Projection, f2: Projection, spec: SystemSpec, depth: int = ORE_DEPTH):
    """Both projections rewritten at one shared level."""
    if f1.level == f2.level:
        return f1, f2
    alpha, beta = ore_witness(f1.level, f2.level, spec, depth, "right")
    return proj_refine(f1, alpha), proj_refine(f2, beta)


def proj_mul(f1: Projection, f2: Projection, spec: SystemSpec) -> Projection:
    if f1.n != f2.n:
        raise DimensionMismatch("projections of different rank")
    g1, g2 = common_level(f1, f2, spec)
    return Projection(g1.level, tuple(set(g1.cosets) & set(g2.cosets)))


def proj_equal(f1: Projection, f2: Projection, spec: SystemSpec) -> bool:
    """Equality as partial identities, decided at a common refinement."""
    if f1.is_zero() or f2.is_zero():
        return f1.is_zero() and f2.is_zero()
    g1, g2 = common_level(f1, f2, spec)
    return g1.cosets == g2.cosets


def proj_leq(f1: Projection, f2: Projection, spec: SystemSpec) -> bool:
    return proj_equal(proj_mul(f1, f2, spec), f1, spec)


def proj_conj_u(m: Sequence[int], f: Projection) -> Projection:
    """``u(m) f u(m)*``."""
    m = tuple(m)
    return Projection(f.level, tuple(vec_add(k, m) for k in f.cosets))


def proj_conj_s(a, f: Projection) -> Projection:
    """``s_a f s_a*``."""
    a = as_integer_matrix(a)
    return Projection(a @ f.level, tuple(a @ k for k in f.cosets))


def proj_conj_s_star(a, f: Projection, spec: SystemSpec, witness=None) -> Projection:
    """``s_a* f s_a``.

    With ``a·α == C·β`` the result lives at level α and keeps the classes
    ``v + αZ^n`` whose image ``A·v`` lands in f.  ``witness`` overrides the
    pair (α, β) found by the common-multiple search.
    """
    a = as_integer_matrix(a)
    if witness is None:
        witness = ore_witness(a, f.level, spec, ORE_DEPTH, "right")
    alpha, beta = (as_integer_matrix(x) for x in witness)
    if a @ alpha != f.level @ beta:
        raise ValueError("witness does not satisfy a·α == C·β")
    return _conj_s_star(a, f, alpha)


@lru_cache(maxsize=65536)
def _conj_s_star(a: IntegerMatrix, f: Projection, alpha: IntegerMatrix) -> Projection:
    if f.is_zero():
        return Projection(alpha, ())
    Q = quotient_group(f.level)
    targets = set(f.cosets)
    keep = tuple(v for v in quotient_group(alpha).elements() if Q.reduce(a @ v) in targets)
    return Projection(alpha, keep)


# Elements of T -------------------------------------------------------------


@dataclass(frozen=True)
class TElement:
    """``E · w_g``; canonical when E lies under the range of ``w_g``."""

    range_proj: Projection
    germ: GroupElement

    @property
    def n(self) -> int:
        return self.germ.n

    def is_zero(self) -> bool:
        return self.range_proj.is_zero()

    def is_idempotent(self) -> bool:
        return self.germ.is_identity()

    def __str__(self):
        return "0" if self.is_zero() else f"{self.range_proj}·{self.germ}"


def zero_element(n: int) -> TElement:
    return TElement(Projection.zero(n), GroupElement.identity(n))


def one_element(n: int) -> TElement:
    return TElement(Projection.one(n), GroupElement.identity(n))


def conjugate(g: GroupElement, f: Projection, spec: SystemSpec) -> Projection:
    """``w_g f w_g*`` computed from the factorization ``g = a⁻¹ m b``."""
    fac = factorize(g, spec)
    return proj_conj_s_star(fac.a, proj_conj_u(fac.m, proj_conj_s(fac.b, f)), spec)


def w_range_projection(g: GroupElement, spec: SystemSpec) -> Projection:
    """``w_g w_g*``: the points ``y`` for which ``g⁻¹(y)`` is integral."""
    return _w_range(g, spec)


@lru_cache(maxsize=65536)
def _w_range(g: GroupElement, spec: SystemSpec) -> Projection:
    fac = factorize(g, spec)
    return proj_conj_s_star(fac.a, proj_conj_u(fac.m, Projection.range_of(fac.b)), spec)


def t_canonicalize(t: TElement, spec: SystemSpec) -> TElement:
    E = proj_mul(t.range_proj, w_range_projection(t.germ, spec), spec)
    if E.is_zero():
        return zero_element(t.n)
    return TElement(E, t.germ)


def w_element(g: GroupElement, spec: SystemSpec) -> TElement:
    """The canonical form of ``w_g`` itself."""
    return t_canonicalize(TElement(Projection.one(g.n), g), spec)


def projection_element(f: Projection) -> TElement:
    if f.is_zero():
        return zero_element(f.n)
    return TElement(f, GroupElement.identity(f.n))


def s_element(a, spec: SystemSpec) -> TElement:
    a = as_integer_matrix(a)
    return w_element(GroupElement.linear(a), spec)


def s_star_element(a, spec: SystemSpec) -> TElement:
    a = as_integer_matrix(a)
    return w_element(GroupElement.linear(a.inverse()), spec)


def u_element(m: Sequence[int], spec: SystemSpec) -> TElement:
    return w_element(GroupElement.translation(tuple(m)), spec)


def from_five_tuple(a, m: Sequence[int], f: Projection, m2: Sequence[int], b, spec: SystemSpec) -> TElement:
    """Normal form of ``s_a* u(m) f u(m2) s_b``.

    Uses ``s_a* u(m) f u(m2) s_b = [s_a* u(m) f u(m)* s_a] · w_{a⁻¹(m+m2)b}``.
    """
    a = as_integer_matrix(a)
    b = as_integer_matrix(b)
    E = proj_conj_s_star(a, proj_conj_u(m, f), spec)
    ainv = a.inverse()
    g = GroupElement(ainv @ vec_add(tuple(m), tuple(m2)), ainv @ b)
    return t_canonicalize(TElement(E, g), spec)


def t_mul(t1: TElement, t2: TElement, spec: SystemSpec) -> TElement:
    """``t1 · t2`` (t2 applied first).

    ``E1 w_{g1} E2 w_{g2} = E1 · (w_{g1} E2 w_{g1}*) · w_{g1 g2}``, because
    ``w_{g1} w_{g2}`` equals ``w_{g1 g2}`` cut down to the range of ``w_{g1}``.
    """
    if t1.n != t2.n:
        raise DimensionMismatch("elements of different rank")
    if t1.is_zero() or t2.is_zero():
        return zero_element(t1.n)
    return _t_mul(t1, t2, spec)


@lru_cache(maxsize=65536)
def _t_mul(t1: TElement, t2: TElement, spec: SystemSpec) -> TElement:
    E = proj_mul(t1.range_proj, conjugate(t1.germ, t2.range_proj, spec), spec)
    return t_canonicalize(TElement(E, t1.germ * t2.germ), spec)


def commutation_product(f1: Factorization, f2: Factorization, spec: SystemSpec) -> TElement:
    """``(s_{a1}* u(m1) s_{b1})(s_{a2}* u(m2) s_{b2})`` by moving ``s_{b1} s_{a2}*`` past each other.

    With ``c = β b1 = α a2`` the product is
    ``s_{βa1}* u(βm1) e_c u(αm2) s_{αb2}``.  Kept as an independent route to
    cross-check :func:`t_mul`.
    """
    alpha, beta = ore_witness(f2.a, f1.b, spec, ORE_DEPTH, "left")
    c = alpha @ f2.a
    return from_five_tuple(
        beta @ f1.a,
        beta @ f1.m,
        Projection.range_of(c),
        alpha @ f2.m,
        alpha @ f2.b,
        spec,
    )


def t_adjoint(t: TElement, spec: SystemSpec) -> TElement:
    if t.is_zero():
        return t
    ginv = t.germ.inverse()
    return t_canonicalize(TElement(conjugate(ginv, t.range_proj, spec), ginv), spec)


def t_equal(t1: TElement, t2: TElement, spec: SystemSpec) -> bool:
    # Complete for canonical forms: two affine maps that agree on a coset of a
    # finite-index lattice agree everywhere, so equal partial maps force equal germs.
    if t1.is_zero() or t2.is_zero():
        return t1.is_zero() and t2.is_zero()
    return t1.germ == t2.germ and proj_equal(t1.range_proj, t2.range_proj, spec)


def t_product(elements: Iterable[TElement], spec: SystemSpec) -> TElement:
    """Left-to-right product; the empty product is the unit."""
    elements = list(elements)
    if not elements:
        return one_element(spec.n)
    result = elements[0]
    for t in elements[1:]:
        result = t_mul(result, t, spec)
    return result


def source_projection(t: TElement, spec: SystemSpec) -> Projection:
    """``t* t``."""
    return t_mul(t_adjoint(t, spec), t, spec).range_proj
