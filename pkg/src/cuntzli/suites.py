"""Seeded random generators and the verification suites driven by the CLI.

Every suite returns a list of report lines; an empty list means pass.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .acting_system import GroupElement, SystemSpec
from .duality import (
    FIELDS,
    build_alpha,
    default_test_set,
    pairing,
    psi_kernel_check,
    trace_form,
    transpose_c3_transfer,
    verify_discriminant_lemma,
)
from .exact_linalg import IntegerMatrix, format_vector
from .inverse_semigroup import (
    Projection,
    TElement,
    common_level,
    projection_element,
    proj_refine,
    s_element,
    s_star_element,
    t_adjoint,
    t_equal,
    t_mul,
    t_product,
    u_element,
    w_range_projection,
)
from .regular_rep import Window, check_product, verify_cuntz_li
from .tight_space import (
    IN,
    Cylinder,
    GroupoidElement,
    cyl_eval,
    germ_equal,
    groupoid_compose,
    phi,
    tight_germ_equal,
    ultrafilters_at_level,
)


def small_vector(rng: random.Random, n: int, bound: int = 2) -> tuple:
    return tuple(rng.randint(-bound, bound) for _ in range(n))


def random_letter(spec: SystemSpec, rng: random.Random) -> TElement:
    """One of ``s_a``, ``s_a*``, ``u(m)`` or ``u(k) e_a u(k)*`` for a generator a."""
    kind = rng.randrange(4)
    a = rng.choice(spec.word_generators)
    if kind == 0:
        return s_element(a, spec)
    if kind == 1:
        return s_star_element(a, spec)
    if kind == 2:
        return u_element(small_vector(rng, spec.n), spec)
    return projection_element(Projection.range_of(a, small_vector(rng, spec.n)))


def random_element(spec: SystemSpec, rng: random.Random, max_letters: int = 3) -> TElement:
    return t_product([random_letter(spec, rng) for _ in range(rng.randint(1, max_letters))], spec)


def random_nonzero_element(spec: SystemSpec, rng: random.Random, max_letters: int = 3) -> TElement:
    while True:
        t = random_element(spec, rng, max_letters)
        if not t.is_zero():
            return t


def random_product(spec: SystemSpec, rng: random.Random, max_length: int = 2) -> IntegerMatrix:
    gens = spec.word_generators
    p = IntegerMatrix.identity(spec.n)
    for _ in range(rng.randint(0, max_length)):
        p = p @ rng.choice(gens)
    return p


def random_group_element(spec: SystemSpec, rng: random.Random) -> GroupElement:
    """``a⁻¹ m b`` for short generator products a, b and a small m."""
    a = random_product(spec, rng)
    b = random_product(spec, rng)
    ainv = a.inverse()
    return GroupElement(ainv @ small_vector(rng, spec.n), ainv @ b)


def random_subcylinder(f: Projection, spec: SystemSpec, rng: random.Random) -> Cylinder:
    """A cylinder inside the nonzero projection f, possibly one level finer."""
    f = proj_refine(f, random_product(spec, rng, 1))
    return Cylinder(f.level, rng.choice(f.cosets))


def random_arrow(spec: SystemSpec, rng: random.Random) -> GroupoidElement:
    while True:
        g = random_group_element(spec, rng)
        R = w_range_projection(g, spec)
        if not R.is_zero():
            return GroupoidElement.make(random_subcylinder(R, spec, rng), g, spec)


def random_composable_pair(spec: SystemSpec, rng: random.Random):
    """``(γ1, γ2)`` with the range of γ2 inside the source of γ1."""
    gamma1 = random_arrow(spec, rng)
    while True:
        g2 = random_group_element(spec, rng)
        here = Projection(gamma1.source.level, (gamma1.source.residue,))
        x, r = common_level(here, w_range_projection(g2, spec), spec)
        inside = sorted(set(x.cosets) & set(r.cosets))
        if not inside:
            continue
        y = Cylinder(x.level, rng.choice(inside))
        return gamma1, GroupoidElement.make(y, g2, spec)


# Suites ------------------------------------------------------------------


def relations_suite(spec: SystemSpec, seed: int = 0, level: int = 3, window: int = 8) -> list[str]:
    w = Window.build(spec, window, level)
    report = []
    for a in spec.word_generators:
        report.extend(verify_cuntz_li(spec, a, w))
    return report


def semigroup_suite(spec: SystemSpec, seed: int = 0, level: int = 3, window: int = 8, count: int = 50) -> list[str]:
    """Products against the oracle and the inverse-semigroup axioms on random elements."""
    rng = random.Random(seed)
    w = Window.build(spec, window, level)
    report = []
    for _ in range(count):
        t1, t2 = random_element(spec, rng), random_element(spec, rng)
        product = t_mul(t1, t2, spec)
        report.extend(check_product(t1, t2, product, w, spec))
        report.extend(inverse_semigroup_axioms(t1, t2, spec))
    return report


def inverse_semigroup_axioms(v: TElement, w: TElement, spec: SystemSpec) -> list[str]:
    out = []
    vs = t_adjoint(v, spec)
    if not t_equal(t_mul(t_mul(v, vs, spec), v, spec), v, spec):
        out.append(f"VIOLATION vv*v {v} v other")
    if not t_equal(t_mul(t_mul(vs, v, spec), vs, spec), vs, spec):
        out.append(f"VIOLATION v*vv* {v} v* other")
    if not t_equal(t_adjoint(vs, spec), v, spec):
        out.append(f"VIOLATION v** {v} v other")
    lhs = t_adjoint(t_mul(v, w, spec), spec)
    rhs = t_mul(t_adjoint(w, spec), vs, spec)
    if not t_equal(lhs, rhs, spec):
        out.append(f"VIOLATION (vw)* {v},{w} {rhs} {lhs}")
    square = t_mul(v, v, spec)
    idempotent = t_equal(square, v, spec)
    if idempotent != (v.is_zero() or v.germ.is_identity()):
        out.append(f"VIOLATION idempotent {v} {v.germ.is_identity()} {idempotent}")
    if not t_mul(v, vs, spec).is_idempotent():
        out.append(f"VIOLATION vv*-germ {v} identity other")
    return out


def groupoid_suite(spec: SystemSpec, seed: int = 0, level: int = 3, window: int = 8, count: int = 50) -> list[str]:
    rng = random.Random(seed)
    report = []
    for _ in range(count):
        g1, g2 = random_composable_pair(spec, rng)
        verdict = phi_product_verdict(g1, g2, spec)
        if verdict is not IN:
            report.append(f"VIOLATION phi-product {g1}*{g2} In {verdict.value}")
    return report


def phi_product_verdict(g1: GroupoidElement, g2: GroupoidElement, spec: SystemSpec):
    prod = groupoid_compose(g1, g2, spec)
    image = phi(prod, spec).t
    composite = t_mul(phi(g1, spec).t, phi(g2, spec).t, spec)
    return tight_germ_equal(prod.x, image, composite, spec)


def enumerate_arrows(spec: SystemSpec, level: IntegerMatrix, group_elements) -> list[GroupoidElement]:
    """Every arrow ``(x, g)`` with x a cylinder at ``level`` lying inside the range of ``w_g``."""
    arrows = []
    for g in group_elements:
        R = w_range_projection(g, spec)
        for x in ultrafilters_at_level(level):
            if cyl_eval(x, R, spec, resolve=True) is IN:
                arrows.append(GroupoidElement.make(x, g, spec))
    return arrows


def phi_injectivity(spec: SystemSpec, level: IntegerMatrix, group_elements) -> list[str]:
    """Pairwise: φ-images equal as germs exactly when the arrows are equal as germs."""
    arrows = enumerate_arrows(spec, level, group_elements)
    images = [phi(a, spec) for a in arrows]
    report = []
    for i in range(len(arrows)):
        for j in range(i + 1, len(arrows)):
            if arrows[i].x != arrows[j].x:
                continue
            same_arrow = germ_equal(arrows[i], arrows[j], spec)
            same_image = tight_germ_equal(arrows[i].x, images[i].t, images[j].t, spec)
            if same_arrow is not same_image:
                report.append(f"VIOLATION phi-injective {arrows[i]}~{arrows[j]} {same_arrow.value} {same_image.value}")
    return report


def random_rational(rng: random.Random, bound: int = 5, den: int = 6) -> Fraction:
    return Fraction(rng.randint(-bound * den, bound * den), rng.randint(1, den))


def duality_suite(spec: SystemSpec, seed: int = 0, level: int = 3, window: int = 8, field_table=None, count: int = 100) -> list[str]:
    rng = random.Random(seed)
    report = []
    tables = [field_table] if field_table is not None else list(FIELDS.values())
    for table in tables:
        nf = build_alpha(table)
        trace_form(nf)
        samples = [tuple(random_rational(rng) for _ in range(nf.n)) for _ in range(count)]
        report.extend(verify_discriminant_lemma(nf, samples))
    for a in spec.generators:
        report.extend(transpose_c3_transfer(a, None, 5))
    report.extend(pairing_checks(spec, rng, count))
    return report


def random_point_of_N(spec: SystemSpec, rng: random.Random, transpose: bool = False):
    """``γ⁻¹ v`` (or ``(γᵗ)⁻¹ v``) for a short product γ and small integer v."""
    gamma = random_product(spec, rng, 3)
    if transpose:
        gamma = gamma.T
    return gamma.inverse() @ small_vector(rng, spec.n, 4)


def pairing_checks(spec: SystemSpec, rng: random.Random, count: int = 100) -> list[str]:
    report = []
    n = spec.n
    for _ in range(count):
        x, y = random_point_of_N(spec, rng), random_point_of_N(spec, rng)
        z = random_point_of_N(spec, rng, transpose=True)
        s = tuple(p + q for p, q in zip(x, y))
        if pairing(s, z) != pairing(x, z) + pairing(y, z):
            report.append(f"VIOLATION bilinear {format_vector(x)},{format_vector(y)} {format_vector(z)}")
        k = small_vector(rng, n, 5)
        if not pairing(k, small_vector(rng, n, 5)).is_zero():
            report.append(f"VIOLATION integral-pairing {format_vector(k)}")
    tests = default_test_set(spec)
    for _ in range(count):
        x = random_point_of_N(spec, rng, transpose=True)
        if not psi_kernel_check(x, x, spec, tests):
            report.append(f"VIOLATION diagonal {format_vector(x)} true false")
    return report


SUITES = {
    "relations": relations_suite,
    "semigroup": semigroup_suite,
    "groupoid": groupoid_suite,
    "duality": duality_suite,
}
