import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuntzli.document import dump_document, load_document, parse_document
from cuntzli.duality import SQRT2
from cuntzli.errors import ParseError
from cuntzli.exact_linalg import IntegerMatrix
from cuntzli.inverse_semigroup import Projection, t_equal, t_mul
from cuntzli.suites import random_arrow, random_element
from cuntzli.syntax import (
    format_arrow,
    format_element,
    parse_arrow,
    parse_cylinder,
    parse_element,
    parse_projection,
    parse_rational,
)
from cuntzli.tight_space import Cylinder

from conftest import A_EX, SPECS

DOCS = __import__("pathlib").Path(__file__).resolve().parents[1] / "documents"


def test_parse_and_format_examples(dyadic):
    assert format_element(parse_element("s[2] s*[2]", dyadic), dyadic) == "f[2;{0}]"
    left = parse_element("u[1] s[2]", dyadic)
    right = parse_element("s*[2] u[1]", dyadic)
    assert format_element(t_mul(left, right, dyadic), dyadic) == "f[2;{1}] · u[2]"
    assert format_element(parse_element("f[2;{0}] f[2;{1}]", dyadic), dyadic) == "0"
    assert format_element(parse_element("1", dyadic), dyadic) == "f[1;{0}]"
    assert format_element(parse_element("s[4]", dyadic), dyadic) == "s[4]"


def test_separators_and_whitespace(dyadic):
    a = parse_element("u[1]·s[2]", dyadic)
    b = parse_element("u[1] . s[2]", dyadic)
    c = parse_element("  u[1]s[2] ", dyadic)
    assert t_equal(a, b, dyadic) and t_equal(b, c, dyadic)


def test_two_dimensional_tokens(skew):
    t = parse_element("s*[[[0,2],[1,-2]]] u[[1,0]] f[[[0,2],[1,-2]];{[0,0],[1,0]}] e[[[0,2],[1,-2]]]", skew)
    assert t_equal(parse_element(format_element(t, skew), skew), t, skew)
    assert parse_projection("[[0,2],[1,-2]];{}", 2).is_zero()


@pytest.mark.parametrize(
    "text",
    ["", "s[3]", "q[2]", "s[2", "u[[1,2]]", "f[2;0]", "f[0;{0}]", "s[1.5]", "$", "f[2]"],
)
def test_malformed_expressions(dyadic, text):
    with pytest.raises(ParseError):
        parse_element(text, dyadic)


@pytest.mark.parametrize("name", sorted(SPECS))
@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_element_round_trip(name, seed):
    spec = SPECS[name]
    t = random_element(spec, random.Random(seed))
    text = format_element(t, spec)
    assert t_equal(parse_element(text, spec), t, spec)
    assert format_element(parse_element(text, spec), spec) == text


@pytest.mark.parametrize("name", sorted(SPECS))
def test_arrow_round_trip(name):
    spec = SPECS[name]
    rng = random.Random(2)
    for _ in range(20):
        gamma = random_arrow(spec, rng)
        back = parse_arrow(format_arrow(gamma, spec), spec)
        assert back.x == gamma.x and back.g == gamma.g


def test_cylinder_syntax(skew):
    assert parse_cylinder("cyl[[[0,2],[1,-2]];[1,0]]", skew) == Cylinder(A_EX, (1, 0))
    with pytest.raises(ParseError):
        parse_cylinder("cyl[[[0,2],[1,-2]]]", skew)


def test_parse_rational():
    assert parse_rational("-3/4") == parse_rational("-0.75")
    with pytest.raises(ParseError):
        parse_rational("1/0")


def test_documents_round_trip():
    for path in sorted(DOCS.glob("*.json")):
        doc = load_document(path)
        text = dump_document(doc)
        again = parse_document(text)
        assert again == doc
        assert dump_document(again) == text


def test_document_field_sections():
    base = {"system": {"n": 2, "generators": [[[0, 2], [1, 0]]], "family": "single_matrix"}}
    assert parse_document(json.dumps({**base, "number_field": {"name": "sqrt2"}})).mult_table() == SQRT2
    inline = parse_document(json.dumps({**base, "number_field": {"mult_table": SQRT2}}))
    assert inline.mult_table() == SQRT2
    with pytest.raises(ParseError):
        parse_document(json.dumps({**base, "number_field": {"name": "nope"}})).mult_table()


@pytest.mark.parametrize(
    "text",
    [
        "{",
        "[]",
        '{"system": {"n": 0, "generators": []}}',
        '{"system": {"n": 1, "generators": [[["x"]]]}}',
        '{"system": {"n": 1, "generators": [[["1/2"]]]}}',
        '{"system": {"n": 1, "generators": [[[0]]]}}',
        '{"system": {"n": 1, "generators": [[[2]]], "family": "odd"}}',
        '{"system": {"n": 1, "generators": [[[2]]]}, "elements": [{"name": 1}]}',
        '{"system": {"n": 1, "generators": [[[2]]]}, "tasks": [{}]}',
    ],
)
def test_malformed_documents(text):
    with pytest.raises(ParseError):
        parse_document(text)


def test_generator_strings_and_integers_agree():
    a = parse_document('{"system": {"n": 1, "generators": [[["2"]]], "family": "single_matrix"}}')
    b = parse_document('{"system": {"n": 1, "generators": [[[2]]], "family": "single_matrix"}}')
    assert a == b and a.system.generators == (IntegerMatrix([[2]]),)
