"""JSON space documents: schema, validation and conversion to Space objects.

A document looks like::

    {"schema_version": 1,
     "space": {"type": "bundled", "name": "genus2"},
     "field": {"characteristic": 3},
     "assertions": {"two_aspherical": true, ...},
     "marked_classes": [{"name": "u", "coordinates": "generator"}]}

Product factors are sub-documents without ``schema_version`` and ``field``.
Errors carry a dotted path such as ``space.factors[1].space.relators[0]``.
"""

from __future__ import annotations

import json
from typing import Mapping

import jsonschema

from .builders import (
    BUNDLED,
    BUNDLED_ASSERTIONS,
    AssertionSet,
    GroupPresentation,
    MarkSpec,
    Space,
    algebra_space,
    bundled,
    chain_complex_space,
    presentation_complex,
    product,
    simplicial_space,
)
from .chain import ChainComplexData
from .errors import SchemaError, SquareZeroViolation, TCCertError
from .field_linalg import FieldSpec
from .ring import GradedAlgebra
from .simplicial import SimplicialComplex

SCHEMA_VERSION = 1

_SCALAR = {"type": ["string", "integer"]}
_INT_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": {
        "assertions": {
            "type": "object",
            "properties": {
                "two_aspherical": {"type": "boolean"},
                "pi1_no_Z2": {"type": "boolean"},
                "pi1_torsion_free": {"type": "boolean"},
                "aspherical_space": {"type": "boolean"},
                "atoroidal_classes": {"type": "array", "items": {"type": "string"}},
                "aspherical_classes": {"type": "array", "items": {"type": "string"}},
                "provenance": {"type": "object", "additionalProperties": {"type": "string"}},
            },
            "additionalProperties": False,
        },
        "marked": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "coordinates": {"oneOf": [{"const": "generator"}, {"type": "array", "items": _SCALAR}]},
                },
                "additionalProperties": False,
            },
        },
        "space": {
            "type": "object",
            "required": ["type"],
            "properties": {
                "type": {"enum": ["simplicial", "bundled", "presentation", "chain_complex", "algebra", "product"]},
                "name": {"type": "string"},
            },
            "allOf": [
                {"if": {"properties": {"type": {"const": "simplicial"}}},
                 "then": {"required": ["vertices", "facets"],
                          "properties": {"vertices": {"type": "integer", "minimum": 1},
                                         "facets": {"type": "array", "minItems": 1,
                                                    "items": {"type": "array", "minItems": 1,
                                                              "items": {"type": "integer", "minimum": 0}}}}}},
                {"if": {"properties": {"type": {"const": "bundled"}}},
                 "then": {"required": ["name"], "properties": {"name": {"enum": list(BUNDLED)}}}},
                {"if": {"properties": {"type": {"const": "presentation"}}},
                 "then": {"required": ["generators", "relators"],
                          "properties": {"generators": {"type": "array", "minItems": 1,
                                                        "items": {"type": "string", "pattern": "^[a-z]$"}},
                                         "relators": {"type": "array",
                                                      "items": {"type": "string", "pattern": "^[a-zA-Z]*$"}},
                                         "relator_not_proper_power": {"type": "boolean"}}}},
                {"if": {"properties": {"type": {"const": "chain_complex"}}},
                 "then": {"required": ["dims", "boundaries"],
                          "properties": {"dims": {"type": "array", "minItems": 1,
                                                  "items": {"type": "integer", "minimum": 0}},
                                         "boundaries": {"type": "array", "items": _INT_MATRIX}}}},
                {"if": {"properties": {"type": {"const": "algebra"}}},
                 "then": {"required": ["degrees", "products"],
                          "properties": {"degrees": {"type": "array", "minItems": 1,
                                                     "items": {"type": "integer", "minimum": 0}},
                                         "labels": {"type": "array", "items": {"type": "string"}},
                                         "products": {"type": "array", "items": {
                                             "type": "array", "minItems": 3, "maxItems": 3,
                                             "prefixItems": [{"type": "integer"}, {"type": "integer"},
                                                             {"oneOf": [{"type": "null"}, {
                                                                 "type": "array", "items": {
                                                                     "type": "array", "minItems": 2, "maxItems": 2,
                                                                     "prefixItems": [{"type": "integer"}, _SCALAR]}}]}]}}}}},
                {"if": {"properties": {"type": {"const": "product"}}},
                 "then": {"required": ["factors"],
                          "properties": {"factors": {"type": "array", "minItems": 1,
                                                     "items": {"$ref": "#/$defs/factor"}}}}},
            ],
        },
        "factor": {
            "type": "object",
            "required": ["space"],
            "properties": {
                "space": {"$ref": "#/$defs/space"},
                "assertions": {"$ref": "#/$defs/assertions"},
                "marked_classes": {"$ref": "#/$defs/marked"},
            },
            "additionalProperties": False,
        },
    },
    "type": "object",
    "required": ["schema_version", "space"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "space": {"$ref": "#/$defs/space"},
        "field": {"type": "object", "required": ["characteristic"],
                  "properties": {"characteristic": {"type": "integer", "minimum": 0}},
                  "additionalProperties": False},
        "assertions": {"$ref": "#/$defs/assertions"},
        "marked_classes": {"$ref": "#/$defs/marked"},
    },
    "additionalProperties": False,
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)
_LYNDON = "one-relator group, relator asserted not a proper power"


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<document>"


def validate_document(doc) -> None:
    """Raise SchemaError for the first (deepest, then leftmost) schema violation."""
    errors = list(_VALIDATOR.iter_errors(doc))
    if not errors:
        return
    best = jsonschema.exceptions.best_match(errors)
    raise SchemaError(_path(best.absolute_path), best.message)


def _marks(entries) -> tuple:
    return tuple(MarkSpec(e["name"], e.get("coordinates", "generator")) for e in entries or ())


def _assertions(d: Mapping | None, default: AssertionSet) -> AssertionSet:
    return default if d is None else AssertionSet.from_dict(d)


def _algebra(sp: Mapping, field: FieldSpec) -> GradedAlgebra:
    table, unknown = {}, []
    for i, j, vec in sp["products"]:
        if vec is None:
            unknown.append((i, j))
        else:
            table[(i, j)] = {k: field.parse(str(c)) for k, c in vec}
    labels = sp.get("labels")
    return GradedAlgebra(field, sp["degrees"], table, labels=labels, unknown=unknown)


def _space(node: Mapping, field: FieldSpec, where: str) -> Space:
    sp = node["space"]
    kind = sp["type"]
    marks = _marks(node.get("marked_classes"))
    given = node.get("assertions")
    name = sp.get("name")
    try:
        if kind == "bundled":
            s = bundled(sp["name"])
            return Space(s.name, s.kind, s.dimension, _assertions(given, BUNDLED_ASSERTIONS[sp["name"]]),
                         marks, complex=s.complex)
        if kind == "simplicial":
            sc = SimplicialComplex(sp["vertices"], tuple(tuple(f) for f in sp["facets"]))
            return simplicial_space(sc, name or "simplicial", _assertions(given, AssertionSet()), marks)
        if kind == "presentation":
            p = GroupPresentation(tuple(sp["generators"]), tuple(sp["relators"]))
            a = _assertions(given, AssertionSet())
            if sp.get("relator_not_proper_power"):
                if len(p.relators) != 1:
                    raise SchemaError(f"{where}.relator_not_proper_power", "only meaningful with exactly one relator")
                d = a.to_dict()
                d["aspherical_space"] = True
                d["provenance"].setdefault("aspherical_space", _LYNDON)
                a = AssertionSet.from_dict(d)
            return presentation_complex(p, name, a, marks)
        if kind == "chain_complex":
            cc = ChainComplexData(tuple(sp["dims"]), tuple(sp["boundaries"]))
            return chain_complex_space(cc, name or "chain_complex", _assertions(given, AssertionSet()), marks)
        if kind == "algebra":
            if sp.get("characteristic", field.characteristic) != field.characteristic:
                raise SchemaError(f"{where}.characteristic",
                                  f"algebra is over characteristic {sp['characteristic']}, requested {field}")
            return algebra_space(_algebra(sp, field), name or "algebra", _assertions(given, AssertionSet()), marks)
        factors = [_space(f, field, f"{where}.factors[{i}].space") for i, f in enumerate(sp["factors"])]
        s = product(factors, name, marks)
        # explicit product-level assertions replace the conservative combination
        return s if given is None else s.with_assertions(AssertionSet.from_dict(given))
    except SchemaError:
        raise
    except SquareZeroViolation as e:
        raise SchemaError(f"{where}.boundaries[{e.degree - 1}]", str(e)) from e
    except (ValueError, TCCertError) as e:
        raise SchemaError(where, str(e)) from e


def field_of(doc: Mapping, override: int | None = None) -> FieldSpec:
    if override is not None:
        return FieldSpec(override)
    if "field" in doc:
        return FieldSpec(doc["field"]["characteristic"])
    if doc["space"]["type"] == "algebra" and "characteristic" in doc["space"]:
        return FieldSpec(doc["space"]["characteristic"])
    return FieldSpec(0)


def load_space(doc: Mapping, field: FieldSpec) -> Space:
    """Validate ``doc`` and build its Space; marked classes are resolved over ``field``."""
    validate_document(doc)
    s = _space(doc, field, "space")
    try:
        s.ring(field)
    except (ValueError, TCCertError) as e:
        raise SchemaError("marked_classes", str(e)) from e
    return s


def parse_document(text: str, source: str = "<input>") -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{source}:{e.lineno}:{e.colno}", e.msg) from e


def read_document(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read(), path)
