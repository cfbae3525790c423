"""JSON documents describing a system, named elements and a task list.

Example::

    {
      "system": {"n": 1, "generators": [[["2"]]], "family": "single_matrix"},
      "elements": [{"name": "x", "expr": "u[1] s[2]"}],
      "tasks": [{"command": "mul", "args": ["x", "s*[2] u[1]"]}]
    }

Matrix entries may be JSON integers or decimal strings (``"-3"``, ``"1/2"``);
the canonical dump always writes strings.  A document may also carry a
``number_field`` section with an n x n x n ``mult_table`` or a shipped
field ``name``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .acting_system import Family, SystemSpec
from .duality import FIELDS
from .errors import CuntzLiError, ParseError


@dataclass(frozen=True)
class Document:
    system: SystemSpec
    elements: tuple = ()
    tasks: tuple = ()
    number_field: dict | None = field(default=None, compare=False)

    def element(self, name: str) -> str | None:
        for entry in self.elements:
            if entry["name"] == name:
                return entry["expr"]
        return None

    def mult_table(self):
        if not self.number_field:
            return None
        if "mult_table" in self.number_field:
            return [[[_entry(c) for c in cell] for cell in row] for row in self.number_field["mult_table"]]
        name = self.number_field.get("name")
        if name not in FIELDS:
            raise ParseError(f"unknown number field {name!r}; shipped: {', '.join(sorted(FIELDS))}")
        return FIELDS[name]


def _entry(x):
    if isinstance(x, bool):
        raise ParseError("booleans are not numbers")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            value = Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational number: {x!r}") from None
        return int(value) if value.denominator == 1 else value
    raise ParseError(f"expected an integer or a decimal string, got {x!r}")


def _integer_matrix(obj, n):
    if not (isinstance(obj, list) and len(obj) == n and all(isinstance(r, list) and len(r) == n for r in obj)):
        raise ParseError(f"generator must be an {n}x{n} array")
    rows = [[_entry(x) for x in r] for r in obj]
    if not all(isinstance(x, int) for r in rows for x in r):
        raise ParseError("generators must have integer entries")
    return rows


def parse_document(text: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from None
    if not isinstance(data, dict) or "system" not in data:
        raise ParseError("document needs a 'system' section")
    system = data["system"]
    if not isinstance(system, dict):
        raise ParseError("'system' must be an object")
    n = system.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("'system.n' must be a positive integer")
    family = system.get("family", Family.GENERAL.value)
    try:
        family = Family(family)
    except ValueError:
        raise ParseError(f"unknown family {family!r}") from None
    generators = system.get("generators", [])
    if not isinstance(generators, list):
        raise ParseError("'system.generators' must be a list")
    try:
        spec = SystemSpec(n, tuple(_integer_matrix(g, n) for g in generators), family)
    except (CuntzLiError, ValueError) as exc:
        raise ParseError(str(exc)) from None
    elements = data.get("elements", [])
    if not isinstance(elements, list) or not all(
        isinstance(e, dict) and isinstance(e.get("name"), str) and isinstance(e.get("expr"), str) for e in elements
    ):
        raise ParseError("'elements' must be a list of {name, expr} objects")
    tasks = data.get("tasks", [])
    if not isinstance(tasks, list) or not all(isinstance(t, dict) and "command" in t for t in tasks):
        raise ParseError("'tasks' must be a list of objects with a 'command'")
    number_field = data.get("number_field")
    if number_field is not None and not isinstance(number_field, dict):
        raise ParseError("'number_field' must be an object")
    return Document(
        spec,
        tuple({"name": e["name"], "expr": e["expr"]} for e in elements),
        tuple(tasks),
        number_field,
    )


def load_document(path) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_document(text)


def document_to_dict(doc: Document) -> dict:
    spec = doc.system
    out = {
        "system": {
            "n": spec.n,
            "family": spec.family.value,
            "generators": [[[str(x) for x in r] for r in g.rows] for g in spec.generators],
        },
        "elements": [dict(e) for e in doc.elements],
        "tasks": [dict(t) for t in doc.tasks],
    }
    if doc.number_field is not None:
        nf = dict(doc.number_field)
        if "mult_table" in nf:
            nf["mult_table"] = [[[str(_entry(c)) for c in cell] for cell in row] for row in nf["mult_table"]]
        out["number_field"] = nf
    return out


def dump_document(doc: Document) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(document_to_dict(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
