"""One-line text syntax for elements, cylinders and arrows.

An element is a product of tokens, leftmost acting last::

    s*[A] u[m] f[C;{k1,k2}] u[m'] s[B]

Scalars and vectors of length one are written bare (``s[2]``, ``u[1]``);
otherwise entries use JSON brackets (``s[[[0,2],[1,-2]]]``, ``u[[1,0]]``).
``0`` and ``1`` denote the zero and unit elements, and ``·`` may separate
factors.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .acting_system import GroupElement, SystemSpec, factorize
from .errors import CuntzLiError, ParseError
from .exact_linalg import IntegerMatrix, format_matrix, format_vector
from .inverse_semigroup import (
    Projection,
    TElement,
    one_element,
    projection_element,
    proj_equal,
    s_element,
    s_star_element,
    t_mul,
    u_element,
    w_range_projection,
    zero_element,
)
from .tight_space import Cylinder, GroupoidElement

SEPARATORS = {"·", "."}
_NAME = re.compile(r"[A-Za-z]+\*?|[01]")


def _split_tokens(text: str) -> list[tuple[str, str]]:
    """``[(name, bracket body)]``; bare tokens such as ``0`` get an empty body."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace() or text[i] in SEPARATORS:
            i += 1
            continue
        match = _NAME.match(text, i)
        if not match:
            raise ParseError(f"unexpected character {text[i]!r} at position {i}")
        name, j = match.group(), match.end()
        if j < n and text[j] == "[":
            depth = 0
            for k in range(j, n):
                depth += {"[": 1, "]": -1}.get(text[k], 0)
                if depth == 0:
                    break
            if depth:
                raise ParseError(f"unbalanced brackets after {name!r}")
            tokens.append((name, text[j + 1 : k]))
            i = k + 1
        else:
            tokens.append((name, ""))
            i = j
    return tokens


def _json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"cannot read {text!r}: {exc.msg}") from None


def parse_matrix(text: str, n: int) -> IntegerMatrix:
    value = _json(text.strip())
    if isinstance(value, int) and n == 1:
        value = [[value]]
    if not (isinstance(value, list) and len(value) == n and all(isinstance(r, list) and len(r) == n for r in value)):
        raise ParseError(f"expected a {n}x{n} integer matrix, got {text!r}")
    if not all(isinstance(x, int) and not isinstance(x, bool) for r in value for x in r):
        raise ParseError(f"matrix entries must be integers: {text!r}")
    try:
        return IntegerMatrix(value)
    except CuntzLiError as exc:
        raise ParseError(str(exc)) from None


def parse_vector(text: str, n: int) -> tuple:
    value = _json(text.strip())
    if isinstance(value, int) and n == 1:
        value = [value]
    if not (isinstance(value, list) and len(value) == n and all(isinstance(x, int) for x in value)):
        raise ParseError(f"expected an integer vector of length {n}, got {text!r}")
    return tuple(value)


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, c in enumerate(text):
        if c in "[{":
            depth += 1
        elif c in "]}":
            depth -= 1
        elif c == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def parse_projection(body: str, n: int) -> Projection:
    parts = _split_top(body, ";")
    if len(parts) != 2:
        raise ParseError(f"projection needs 'level;{{cosets}}', got {body!r}")
    level = parse_matrix(parts[0], n)
    cosets = parts[1].strip()
    if not (cosets.startswith("{") and cosets.endswith("}")):
        raise ParseError(f"coset set must be braced: {cosets!r}")
    inner = cosets[1:-1].strip()
    reps = [parse_vector(k, n) for k in _split_top(inner, ",")] if inner else []
    if level.det() == 0:
        raise ParseError("projection level is singular")
    return Projection(level, tuple(reps))


def parse_element(text: str, spec: SystemSpec) -> TElement:
    n = spec.n
    tokens = _split_tokens(text)
    if not tokens:
        raise ParseError("empty element expression")
    factors = []
    for name, body in tokens:
        if name == "0" and not body:
            factors.append(zero_element(n))
        elif name == "1" and not body:
            factors.append(one_element(n))
        elif name in ("s", "s*"):
            a = parse_matrix(body, n)
            if not spec.in_P(a):
                raise ParseError(f"{format_matrix(a)} is not in the semigroup")
            factors.append(s_element(a, spec) if name == "s" else s_star_element(a, spec))
        elif name == "u":
            factors.append(u_element(parse_vector(body, n), spec))
        elif name == "f":
            factors.append(projection_element(parse_projection(body, n)))
        elif name == "e":
            factors.append(projection_element(Projection.range_of(parse_matrix(body, n))))
        else:
            raise ParseError(f"unknown token {name!r}")
    result = factors[0]
    for t in factors[1:]:
        result = t_mul(result, t, spec)
    return result


def parse_group_element(text: str, spec: SystemSpec) -> GroupElement:
    """The germ of a word in ``s``, ``s*`` and ``u`` tokens."""
    g = GroupElement.identity(spec.n)
    for name, body in _split_tokens(text):
        if name == "s":
            h = GroupElement.linear(parse_matrix(body, spec.n))
        elif name == "s*":
            h = GroupElement.linear(parse_matrix(body, spec.n).inverse())
        elif name == "u":
            h = GroupElement.translation(parse_vector(body, spec.n))
        elif name == "1" and not body:
            continue
        else:
            raise ParseError(f"token {name!r} has no group element")
        g = g * h
    return g


def format_group_word(g: GroupElement, spec: SystemSpec) -> str:
    fac = factorize(g, spec)
    parts = []
    if not fac.a.is_identity():
        parts.append(f"s*[{format_matrix(fac.a)}]")
    if any(fac.m):
        parts.append(f"u[{format_vector(fac.m)}]")
    if not fac.b.is_identity():
        parts.append(f"s[{format_matrix(fac.b)}]")
    return " ".join(parts) or "1"


def format_element(t: TElement, spec: SystemSpec) -> str:
    if t.is_zero():
        return "0"
    if t.germ.is_identity():
        return str(t.range_proj)
    word = format_group_word(t.germ, spec)
    if proj_equal(t.range_proj, w_range_projection(t.germ, spec), spec):
        return word
    return f"{t.range_proj} · {word}"


def parse_cylinder(text: str, spec: SystemSpec) -> Cylinder:
    tokens = _split_tokens(text)
    if len(tokens) != 1 or tokens[0][0] != "cyl":
        raise ParseError(f"expected cyl[C;r], got {text!r}")
    parts = _split_top(tokens[0][1], ";")
    if len(parts) != 2:
        raise ParseError(f"cylinder needs 'level;residue', got {text!r}")
    return Cylinder(parse_matrix(parts[0], spec.n), parse_vector(parts[1], spec.n))


def parse_arrow(text: str, spec: SystemSpec) -> GroupoidElement:
    tokens = _split_tokens(text)
    if len(tokens) != 1 or tokens[0][0] != "arrow":
        raise ParseError(f"expected arrow[cyl[..];word], got {text!r}")
    parts = _split_top(tokens[0][1], ";")
    if len(parts) != 2:
        raise ParseError(f"arrow needs 'cylinder;word', got {text!r}")
    return GroupoidElement.make(parse_cylinder(parts[0], spec), parse_group_element(parts[1], spec), spec)


def format_arrow(gamma: GroupoidElement, spec: SystemSpec) -> str:
    return f"arrow[{gamma.x};{format_group_word(gamma.g, spec)}]"


def parse_rational(text) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise ParseError(f"not a rational number: {text!r}") from None
