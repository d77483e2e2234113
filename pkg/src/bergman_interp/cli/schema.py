"""JSON schemas of the configuration documents, one per subcommand."""

from __future__ import annotations

import json

import jsonschema

from ..errors import ConfigError

_number = {"type": "number"}
_complex = {
    "oneOf": [
        _number,
        {"type": "array", "items": _number, "minItems": 2, "maxItems": 2},
    ]
}
_p = {"oneOf": [{"type": "number", "exclusiveMinimum": 0}, {"enum": ["inf"]}]}
_params = {
    "type": "object",
    "properties": {"p": _p, "alpha": {"type": "number", "minimum": -1}},
    "additionalProperties": False,
}
_quadrature = {
    "type": "object",
    "properties": {
        "n_radial": {"type": "integer", "minimum": 4},
        "n_angular": {"type": "integer", "minimum": 4},
        "max_refinements": {"type": "integer", "minimum": 0},
        "rtol": {"type": "number", "exclusiveMinimum": 0},
    },
    "additionalProperties": False,
}
_strategy = {"enum": ["paper", "greedy"]}
_pair = {
    "type": "object",
    "properties": {
        "u": {"type": ["string", "number"]},
        "phi": {"type": ["string", "number"]},
        "k": {"type": "integer", "minimum": 0},
    },
    "required": ["u", "phi", "k"],
    "additionalProperties": False,
}

SCHEMAS = {
    "interpolate": {
        "type": "object",
        "properties": {
            "points": {"type": "array", "items": _complex, "minItems": 1},
            "J": {"type": "integer", "minimum": 0},
            "params": _params,
            "strategy": _strategy,
            "dps": {"type": "integer", "minimum": 20},
            "estimate_norm": {"type": "boolean"},
            "quadrature": _quadrature,
        },
        "required": ["points", "J"],
        "additionalProperties": False,
    },
    "sweep": {
        "type": "object",
        "properties": {
            "directions": {"type": "array", "items": _complex, "minItems": 1},
            "t": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                  "minItems": 1},
            "J": {"type": "integer", "minimum": 0},
            "params": _params,
            "strategy": _strategy,
            "quadrature": _quadrature,
        },
        "required": ["directions", "t"],
        "additionalProperties": False,
    },
    "check-order-bounded": {
        "type": "object",
        "properties": {
            "source": _params,
            "target": _params,
            "pairs": {"type": "array", "items": _pair, "minItems": 1},
            "quadrature": _quadrature,
        },
        "required": ["pairs", "target"],
        "additionalProperties": False,
    },
    "check-compact": {
        "type": "object",
        "properties": {
            "source": _params,
            "pairs": {"type": "array", "items": _pair, "minItems": 1},
            "sequence_check": {"type": "boolean"},
        },
        "required": ["pairs"],
        "additionalProperties": False,
    },
    "kernel-norms": {
        "type": "object",
        "properties": {
            "params": {"type": "array", "items": _params, "minItems": 1},
            "m": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
            "lambda": {"type": "array", "items": _complex, "minItems": 1},
            "quadrature": {"type": "boolean"},
        },
        "required": ["m", "lambda"],
        "additionalProperties": False,
    },
    "verify": {
        "type": "object",
        "properties": {
            "matrix_trials": {"type": "integer", "minimum": 1},
            "analytic_trials": {"type": "integer", "minimum": 1},
            "inject": {
                "type": "object",
                "properties": {"D_factor": {"type": "number", "exclusiveMinimum": 0}},
                "additionalProperties": False,
            },
        },
        "additionalProperties": False,
    },
}


def load_config(command: str, path: str | None) -> dict:
    """Read and validate the configuration for ``command``.

    Errors carry the line (for JSON syntax) or the field path (for schema
    violations).
    """
    if path is None:
        doc = {}
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    validator = jsonschema.Draft202012Validator(SCHEMAS[command])
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        field = "/".join(str(x) for x in e.absolute_path) or "<root>"
        raise ConfigError(f"{path or '<config>'}: field {field}: {e.message}")
    return doc


def to_complex(v) -> complex:
    if isinstance(v, list):
        return complex(v[0], v[1])
    return complex(v)
