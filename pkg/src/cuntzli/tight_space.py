"""Finite-resolution model of the profinite completion of Z^n and the tight groupoid.

A point of the completion is only ever known through a cylinder ``(C, r)``:
the set of points whose residue modulo ``C·Z^n`` is ``r``.  Queries that
would need a finer level answer ``Unknown`` instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .acting_system import Family, GroupElement, SystemSpec, factorize, ore_witness
from .errors import NotComposable, NotSupported, ResolutionTooCoarse
from .exact_linalg import (
    IntegerMatrix,
    Vector,
    as_integer_matrix,
    exponent,
    format_matrix,
    format_vector,
    lattice_contains,
    lattice_member,
    quotient_group,
    vec_neg,
    zero_vector,
)
from .inverse_semigroup import (
    ORE_DEPTH,
    Projection,
    TElement,
    proj_refine,
    t_mul,
    w_element,
)


class Tristate(str, Enum):
    IN = "In"
    OUT = "Out"
    UNKNOWN = "Unknown"


IN, OUT, UNKNOWN = Tristate.IN, Tristate.OUT, Tristate.UNKNOWN


@dataclass(frozen=True)
class Cylinder:
    """Points of the completion whose residue modulo ``level·Z^n`` is ``residue``."""

    level: IntegerMatrix
    residue: Vector

    def __post_init__(self):
        level = as_integer_matrix(self.level)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "residue", quotient_group(level).reduce(tuple(self.residue)))

    @classmethod
    def whole(cls, n: int) -> "Cylinder":
        return cls(IntegerMatrix.identity(n), zero_vector(n))

    @property
    def n(self) -> int:
        return self.level.n

    def as_projection(self) -> Projection:
        return Projection(self.level, (self.residue,))

    def __str__(self):
        return f"cyl[{format_matrix(self.level)};{format_vector(self.residue)}]"


def is_coarser(C_f, C_x) -> bool:
    """``C_x Z^n ⊆ C_f Z^n``: residues mod C_x determine residues mod C_f."""
    return lattice_contains(C_f, C_x)


def cyl_eval(x: Cylinder, f: Projection, spec: SystemSpec | None = None, resolve: bool = False) -> Tristate:
    """Value of the character at x on the projection f.

    By default only levels at least as coarse as the cylinder's are decided.
    With ``resolve=True`` the cylinder is treated as a set: both sides are
    refined to a common level and the answer is In/Out when x lies inside
    or outside f, Unknown when it straddles.
    """
    if is_coarser(f.level, x.level):
        return IN if f.contains(x.residue) else OUT
    if not resolve:
        return UNKNOWN
    if f.is_zero():
        return OUT
    xs, fs = _common(x.as_projection(), f, spec)
    inside = set(xs.cosets) & set(fs.cosets)
    if not inside:
        return OUT
    if len(inside) == len(xs.cosets):
        return IN
    return UNKNOWN


def _common(p: Projection, q: Projection, spec: SystemSpec):
    alpha, beta = ore_witness(p.level, q.level, spec, ORE_DEPTH, "right")
    return proj_refine(p, alpha), proj_refine(q, beta)


def cylinder_relation(x: Cylinder, y: Cylinder, spec: SystemSpec) -> str:
    """One of "equal", "inside" (x ⊂ y), "contains" (y ⊂ x), "disjoint", "overlap"."""
    xs, ys = _common(x.as_projection(), y.as_projection(), spec)
    a, b = set(xs.cosets), set(ys.cosets)
    if a == b:
        return "equal"
    if not a & b:
        return "disjoint"
    if a <= b:
        return "inside"
    if b <= a:
        return "contains"
    return "overlap"


def ultrafilters_at_level(C, spec: SystemSpec | None = None) -> list[Cylinder]:
    """One cylinder per residue class modulo ``C·Z^n``."""
    C = as_integer_matrix(C)
    return [Cylinder(C, r) for r in quotient_group(C).elements()]


def act_conj(a, x: Cylinder) -> Cylinder:
    """Image of x under ``y ↦ a·y``."""
    a = as_integer_matrix(a)
    return Cylinder(a @ x.level, a @ x.residue)


def act_conj_inv(a, x: Cylinder) -> Cylinder | Tristate:
    """Preimage of x under ``y ↦ a·y``.

    Out when the residue is not divisible by a (x misses ``a·Z^n``); Unknown
    when the level of x is not a multiple of a.
    """
    a = as_integer_matrix(a)
    if not lattice_contains(a, x.level):
        return UNKNOWN
    if not lattice_member(x.residue, a):
        return OUT
    ainv = a.inverse()
    return Cylinder(as_integer_matrix(ainv @ x.level), ainv @ x.residue)


def act_translate(m: Sequence[int], x: Cylinder) -> Cylinder:
    return Cylinder(x.level, tuple(r + k for r, k in zip(x.residue, m)))


def act_group(g: GroupElement, x: Cylinder, spec: SystemSpec) -> Cylinder | Tristate:
    """``x·g = b⁻¹(a·x − m)`` for ``g = a⁻¹ m b``: the points y with ``g(y) ∈ x``."""
    fac = factorize(g, spec)
    y = act_translate(vec_neg(fac.m), act_conj(fac.a, x))
    return act_conj_inv(fac.b, y)


@dataclass(frozen=True)
class GroupoidElement:
    """The arrow with range x and source ``x·g``."""

    x: Cylinder
    g: GroupElement
    source: Cylinder

    @classmethod
    def make(cls, x: Cylinder, g: GroupElement, spec: SystemSpec) -> "GroupoidElement":
        s = act_group(g, x, spec)
        if not isinstance(s, Cylinder):
            raise NotComposable(f"{x} is not moved into the completion by {g} ({s.value})")
        return cls(x, g, s)

    def __str__(self):
        return f"arrow[{self.x};{self.g}]"


def groupoid_unit(x: Cylinder) -> GroupoidElement:
    return GroupoidElement(x, GroupElement.identity(x.n), x)


def groupoid_inverse(gamma: GroupoidElement, spec: SystemSpec) -> GroupoidElement:
    return GroupoidElement.make(gamma.source, gamma.g.inverse(), spec)


def groupoid_compose(g1: GroupoidElement, g2: GroupoidElement, spec: SystemSpec) -> GroupoidElement:
    """``(x, g1)(y, g2) = (x', g1 g2)`` on the overlap of ``s(γ1)`` and ``r(γ2)``.

    When ``r(γ2)`` is smaller than ``s(γ1)`` the range is shrunk accordingly.
    """
    rel = cylinder_relation(g1.source, g2.x, spec)
    g = g1.g * g2.g
    if rel in ("equal", "inside"):
        return GroupoidElement.make(g1.x, g, spec)
    if rel == "contains":
        x = act_group(g1.g.inverse(), g2.x, spec)
        if not isinstance(x, Cylinder):
            raise ResolutionTooCoarse(f"cannot pull {g2.x} back along {g1.g}")
        return GroupoidElement.make(x, g, spec)
    if rel == "disjoint":
        raise NotComposable(f"source {g1.source} and range {g2.x} are disjoint")
    raise ResolutionTooCoarse(f"source {g1.source} and range {g2.x} overlap only partially")


@dataclass(frozen=True)
class TightGerm:
    """A germ ``[(x, t)]`` of an element of T at the points of a cylinder."""

    x: Cylinder
    t: TElement


def phi(gamma: GroupoidElement, spec: SystemSpec) -> TightGerm:
    """Send ``(x, a⁻¹ m b)`` to the germ of ``s_a* u(m) s_b`` at x."""
    t = w_element(gamma.g, spec)
    if cyl_eval(gamma.x, t.range_proj, spec, resolve=True) is not IN:
        raise ResolutionTooCoarse(f"{gamma.x} is not inside the range of the element")
    return TightGerm(gamma.x, t)


def germ_equal(g1: GroupoidElement, g2: GroupoidElement, spec: SystemSpec) -> Tristate:
    """Whether two arrows define the same germ.

    Equal group elements on nested cylinders agree near every point of the
    smaller one; different affine maps never agree on an open set.
    """
    rel = cylinder_relation(g1.x, g2.x, spec)
    if rel == "disjoint" or g1.g != g2.g:
        return OUT
    if rel in ("equal", "inside", "contains"):
        return IN
    return UNKNOWN


def tight_germ_equal(x: Cylinder, t1: TElement, t2: TElement, spec: SystemSpec) -> Tristate:
    """Germ equality of two elements of T at the points of x."""
    v1 = cyl_eval(x, t1.range_proj, spec, resolve=True)
    v2 = cyl_eval(x, t2.range_proj, spec, resolve=True)
    if UNKNOWN in (v1, v2):
        return UNKNOWN
    if v1 is IN and v2 is IN and t1.germ == t2.germ:
        return IN
    return OUT


def phi_preserves_product(g1: GroupoidElement, g2: GroupoidElement, spec: SystemSpec) -> Tristate:
    """Compare ``φ(γ1γ2)`` with ``φ(γ1)φ(γ2)`` as germs at the range of the product."""
    prod = groupoid_compose(g1, g2, spec)
    left = phi(prod, spec)
    right = t_mul(phi(g1, spec).t, phi(g2, spec).t, spec)
    return tight_germ_equal(prod.x, left.t, right, spec)


def dilated_normal_form(x: Cylinder, a, spec: SystemSpec) -> tuple[Cylinder, IntegerMatrix]:
    """Canonical representative of the class of ``(x, a)`` in the dilated group.

    ``(x, a) ~ (αxα⁻¹, αa)``.  The representative divides out as much of a
    as the cylinder allows: powers of the generator for a single matrix,
    primes (smallest first) after moving to a scalar level for scalar families.
    """
    a = as_integer_matrix(a)
    if spec.family is Family.SINGLE_MATRIX:
        A = spec.generators[0]
        k = spec.power_of_generator(a)
        if k is None or k < 0:
            raise NotSupported(f"{format_matrix(a)} is not a power of the generator")
        while k > 0:
            y = act_conj_inv(A, x)
            if not isinstance(y, Cylinder):
                break
            x, k = y, k - 1
        return x, as_integer_matrix(A ** k)
    if spec.has_scalars:
        d = exponent(a)
        alpha = as_integer_matrix(a.inverse().scale(d))
        x = act_conj(alpha, x)
        for p in _prime_factors(d):
            while d % p == 0:
                y = act_conj_inv(IntegerMatrix.scalar(spec.n, p), x)
                if not isinstance(y, Cylinder):
                    break
                x, d = y, d // p
        return x, IntegerMatrix.scalar(spec.n, d)
    raise NotSupported("no canonical chain for a general multi-generator semigroup")


def dilated_equivalent(p1, p2, spec: SystemSpec) -> bool:
    return dilated_normal_form(*p1, spec) == dilated_normal_form(*p2, spec)


def _prime_factors(d: int) -> list[int]:
    out, p = [], 2
    while p * p <= d:
        if d % p == 0:
            out.append(p)
            while d % p == 0:
                d //= p
        p += 1
    if d > 1:
        out.append(d)
    return out
