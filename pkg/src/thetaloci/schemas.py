"""JSON schemas for CLI payloads.

The copies under ``docs/schemas/`` are generated from :data:`SCHEMAS` by
``python3 -m thetaloci.schemas docs/schemas`` and checked against it in the
test suite.
"""

import json
import sys
from pathlib import Path

_REAL_MATRIX = {"type": "array", "minItems": 1,
                "items": {"type": "array", "minItems": 1, "items": {"type": "number"}}}
_INT_MATRIX = {"type": "array", "minItems": 1,
               "items": {"type": "array", "minItems": 1, "items": {"type": "integer"}}}
_BITS = {"type": "array", "minItems": 1, "items": {"enum": [0, 1]}}

DEFINITIONS = {
    "complex": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    "complex_vector": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/complex"}},
    "matrix": {
        "type": "object",
        "properties": {"re": _REAL_MATRIX, "im": _REAL_MATRIX},
        "required": ["re", "im"],
        "additionalProperties": False,
    },
    "char": {
        "type": "object",
        "properties": {"eps": _BITS, "delta": _BITS},
        "required": ["eps", "delta"],
        "additionalProperties": False,
    },
    "symplectic": {
        "type": "object",
        "properties": {k: _INT_MATRIX for k in "abcd"},
        "required": list("abcd"),
        "additionalProperties": False,
    },
    "genus": {"type": "integer", "minimum": 1, "maximum": 6},
    "index": {"type": "integer", "minimum": 0},
}


def _obj(props, required):
    return {"type": "object", "properties": props, "required": required,
            "additionalProperties": False}


_REF = {name: {"$ref": f"#/$defs/{name}"} for name in DEFINITIONS}
_CHARS = {"type": "array", "minItems": 1, "items": _REF["char"]}

PAYLOADS = {
    "eval": _obj({"char": _REF["char"], "tau": _REF["matrix"], "z": _REF["complex_vector"]},
                 ["char", "tau"]),
    "jet": _obj({"char": _REF["char"], "tau": _REF["matrix"], "z": _REF["complex_vector"],
                 "order": {"type": "integer", "minimum": 0, "maximum": 6}},
                ["char", "tau", "order"]),
    "tau-deriv": _obj({"char": _REF["char"], "tau": _REF["matrix"], "i": _REF["index"],
                       "j": _REF["index"]}, ["char", "tau", "i", "j"]),
    "chars": _obj({"g": _REF["genus"], "which": {"enum": ["even", "odd", "all"]}}, ["g"]),
    "act": _obj({"sigma": _REF["symplectic"], "char": _REF["char"], "tau": _REF["matrix"]},
                ["sigma", "char"]),
    "d-form": _obj({"chars": _CHARS, "tau": _REF["matrix"]}, ["chars", "tau"]),
    "d2-form": _obj({"chars": _CHARS, "tau": _REF["matrix"]}, ["chars", "tau"]),
    "grad-matrix": _obj({"tau": _REF["matrix"]}, ["tau"]),
    "even-matrix": _obj({"tau": _REF["matrix"]}, ["tau"]),
    "membership": _obj({
        "tau": _REF["matrix"],
        "locus": {"enum": ["theta_null", "d_theta_null", "d2_theta_null", "in_A_k", "dk_theta_null"]},
        "char": _REF["char"],
        "k": {"type": "integer", "minimum": 0, "maximum": 4},
    }, ["tau", "locus"]),
    "multiplicity": _obj({"tau": _REF["matrix"], "z": _REF["complex_vector"], "char": _REF["char"]},
                         ["tau"]),
    "sample": _obj({
        "kind": {"enum": ["thetanull_times_elliptics", "decomposable_singular", "elliptic_product",
                          "theta_divisor_point", "theta_null_point", "random"]},
        "g": _REF["genus"],
        "k": {"type": "integer", "minimum": 1, "maximum": 4},
        "lambdas": _REF["complex_vector"],
        "tau": _REF["matrix"],
        "char": _REF["char"],
        "start": _REF["complex_vector"],
        "direction": _REF["complex_vector"],
    }, ["kind"]),
    "probe": _obj({
        "kind": {"enum": ["irred", "tsing", "tsing_product", "codg", "y_locus"]},
        "g": _REF["genus"],
        "k": {"type": "integer", "minimum": 0, "maximum": 4},
        "lambdas": _REF["complex_vector"],
    }, ["kind", "g"]),
    "fj-ratio": _obj({"char": _REF["char"], "tau": _REF["matrix"], "z": _REF["complex_vector"],
                      "t": {"type": "number", "exclusiveMinimum": 0}},
                     ["char", "tau", "z", "t"]),
}

COMMANDS = tuple(PAYLOADS)

SCHEMAS = {
    name: {"$schema": "https://json-schema.org/draft/2020-12/schema", "title": name,
           "$defs": DEFINITIONS, **body}
    for name, body in PAYLOADS.items()
}


def write_schemas(directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, schema in SCHEMAS.items():
        (directory / f"{name}.json").write_text(json.dumps(schema, indent=2) + "\n")


if __name__ == "__main__":
    write_schemas(sys.argv[1] if len(sys.argv) > 1 else "docs/schemas")
