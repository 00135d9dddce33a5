"""
JSON schemas for the configuration files of the command-line tools.
Every object is closed (unknown keys are rejected) and every document starts
with the format version. Numbers may be written as JSON numbers or as decimal
strings; complex scalars are [re, im] pairs.
"""

FORMAT_VERSION = 1

DECIMAL_PATTERN = r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$"

DEFINITIONS = {
    "number": {"type": ["number", "string"], "pattern": DECIMAL_PATTERN},
    "positive_integer": {"type": "integer", "minimum": 1},
    "complex": {
        "type": "array",
        "items": {"$ref": "#/definitions/number"},
        "minItems": 2,
        "maxItems": 2,
    },
    "polynomial": {
        "type": "object",
        "properties": {
            "center": {"$ref": "#/definitions/complex"},
            "coeffs": {"type": "array", "items": {"$ref": "#/definitions/complex"}},
        },
        "required": ["coeffs"],
        "additionalProperties": False,
    },
    "set": {
        "oneOf": [
            {
                "type": "object",
                "properties": {
                    "type": {"const": "disk"},
                    "center": {"$ref": "#/definitions/complex"},
                    "radius": {"$ref": "#/definitions/number"},
                },
                "required": ["type", "center", "radius"],
                "additionalProperties": False,
            },
            {
                "type": "object",
                "properties": {
                    "type": {"const": "segment"},
                    "endpoint_a": {"$ref": "#/definitions/complex"},
                    "endpoint_b": {"$ref": "#/definitions/complex"},
                },
                "required": ["type", "endpoint_a", "endpoint_b"],
                "additionalProperties": False,
            },
            {
                "type": "object",
                "properties": {
                    "type": {"const": "polygon"},
                    "vertices": {
                        "type": "array",
                        "items": {"$ref": "#/definitions/complex"},
                        "minItems": 3,
                    },
                    "filled": {"type": "boolean"},
                },
                "required": ["type", "vertices"],
                "additionalProperties": False,
            },
            {
                "type": "object",
                "properties": {
                    "type": {"const": "union"},
                    "members": {
                        "type": "array",
                        "items": {"$ref": "#/definitions/set"},
                        "minItems": 1,
                    },
                },
                "required": ["type", "members"],
                "additionalProperties": False,
            },
            {
                "type": "object",
                "properties": {
                    "type": {"const": "points"},
                    "points": {
                        "type": "array",
                        "items": {"$ref": "#/definitions/complex"},
                        "minItems": 1,
                    },
                },
                "required": ["type", "points"],
                "additionalProperties": False,
            },
        ]
    },
    "target": {
        "oneOf": [
            {
                "type": "object",
                "properties": {
                    "type": {"const": "polynomial"},
                    "center": {"$ref": "#/definitions/complex"},
                    "coeffs": {"type": "array", "items": {"$ref": "#/definitions/complex"}},
                },
                "required": ["type", "coeffs"],
                "additionalProperties": False,
            },
            {
                "type": "object",
                "properties": {
                    "type": {"const": "rational"},
                    "numerator": {"$ref": "#/definitions/polynomial"},
                    "denominator": {"$ref": "#/definitions/polynomial"},
                },
                "required": ["type", "numerator", "denominator"],
                "additionalProperties": False,
            },
            {
                "type": "object",
                "properties": {
                    "type": {"const": "table"},
                    "points": {"type": "array", "items": {"$ref": "#/definitions/complex"}},
                    "values": {"type": "array", "items": {"$ref": "#/definitions/complex"}},
                },
                "required": ["type", "points", "values"],
                "additionalProperties": False,
            },
        ]
    },
    "sequence": {
        "oneOf": [
            {
                "type": "object",
                "properties": {
                    "type": {"const": "formula"},
                    "expression": {"type": "string", "minLength": 1, "maxLength": 200},
                },
                "required": ["type", "expression"],
                "additionalProperties": False,
            },
            {
                "type": "object",
                "properties": {
                    "type": {"const": "table"},
                    "values": {
                        "type": "array",
                        "items": {"$ref": "#/definitions/positive_integer"},
                        "minItems": 1,
                    },
                },
                "required": ["type", "values"],
                "additionalProperties": False,
            },
        ]
    },
    "tolerances": {
        "type": "object",
        "properties": {
            "epsilon": {"$ref": "#/definitions/number"},
            "s": {"$ref": "#/definitions/positive_integer"},
        },
        "required": ["epsilon", "s"],
        "additionalProperties": False,
    },
    "solver": {
        "type": "object",
        "properties": {
            "tol": {"$ref": "#/definitions/number"},
            "max_iters": {"$ref": "#/definitions/positive_integer"},
            "gap_tol": {"$ref": "#/definitions/number"},
            "facets": {"type": "integer", "minimum": 3, "maximum": 256},
        },
        "additionalProperties": False,
    },
    "caps": {
        "type": "object",
        "properties": {
            "max_candidates": {"$ref": "#/definitions/positive_integer"},
            "max_degree": {"$ref": "#/definitions/positive_integer"},
            "horizon": {"type": "integer", "minimum": 10},
        },
        "additionalProperties": False,
    },
}

_FORMAT = {"const": FORMAT_VERSION}

_PROBLEM_PROPERTIES = {
    "sets": {
        "type": "object",
        "properties": {
            "L": {"$ref": "#/definitions/set"},
            "K1": {"$ref": "#/definitions/set"},
            "K2": {"$ref": "#/definitions/set"},
            "omega": {"$ref": "#/definitions/set"},
        },
        "required": ["L", "K1", "K2"],
        "additionalProperties": False,
    },
    "targets": {
        "type": "object",
        "properties": {
            "g": {"$ref": "#/definitions/target"},
            "f1": {"$ref": "#/definitions/target"},
            "f2": {"$ref": "#/definitions/target"},
        },
        "required": ["g", "f1", "f2"],
        "additionalProperties": False,
    },
    "center": {"$ref": "#/definitions/complex"},
    "sequence": {"$ref": "#/definitions/sequence"},
    "tolerances": {"$ref": "#/definitions/tolerances"},
    "density": {"$ref": "#/definitions/number"},
}

_PROBLEM_REQUIRED = ["sets", "targets", "center", "sequence", "tolerances", "density"]

# Construction problem as stored inside a certificate
PROBLEM_SCHEMA = {
    "definitions": DEFINITIONS,
    "type": "object",
    "properties": _PROBLEM_PROPERTIES,
    "required": _PROBLEM_REQUIRED,
    "additionalProperties": False,
}

CONSTRUCT_CONFIG_SCHEMA = {
    "definitions": DEFINITIONS,
    "type": "object",
    "properties": {
        "format": _FORMAT,
        **_PROBLEM_PROPERTIES,
        "solver": {"$ref": "#/definitions/solver"},
        "caps": {"$ref": "#/definitions/caps"},
    },
    "required": ["format"] + _PROBLEM_REQUIRED,
    "additionalProperties": False,
}

SOLVE_CONFIG_SCHEMA = {
    "definitions": DEFINITIONS,
    "type": "object",
    "properties": {
        "format": _FORMAT,
        "grids": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "set": {"$ref": "#/definitions/set"},
                    "target": {"$ref": "#/definitions/target"},
                },
                "required": ["set", "target"],
                "additionalProperties": False,
            },
            "minItems": 1,
        },
        "window": {
            "type": "object",
            "properties": {
                "low": {"type": "integer", "minimum": 0},
                "high": {"type": "integer", "minimum": 0},
            },
            "required": ["low", "high"],
            "additionalProperties": False,
        },
        "center": {"$ref": "#/definitions/complex"},
        "density": {"$ref": "#/definitions/number"},
        "solver": {"$ref": "#/definitions/solver"},
    },
    "required": ["format", "grids", "window", "density"],
    "additionalProperties": False,
}

PROBE_CONFIG_SCHEMA = {
    "definitions": DEFINITIONS,
    "type": "object",
    "properties": {
        "format": _FORMAT,
        "target": {"$ref": "#/definitions/target"},
        "sets": {
            "type": "object",
            "properties": {
                "K": {"$ref": "#/definitions/set"},
                "L": {"$ref": "#/definitions/set"},
            },
            "required": ["K", "L"],
            "additionalProperties": False,
        },
        "density": {"$ref": "#/definitions/number"},
        "schedule": {
            "oneOf": [
                {
                    "type": "object",
                    "properties": {
                        "pairs": {
                            "type": "array",
                            "items": {
                                "type": "array",
                                "items": {"type": "integer"},
                                "minItems": 2,
                                "maxItems": 2,
                            },
                            "minItems": 1,
                        }
                    },
                    "required": ["pairs"],
                    "additionalProperties": False,
                },
                {
                    "type": "object",
                    "properties": {
                        "tau": {"type": "string", "minLength": 1},
                        "sigma": {"type": "string", "minLength": 1},
                        "start": {"$ref": "#/definitions/positive_integer"},
                        "stop": {"$ref": "#/definitions/positive_integer"},
                    },
                    "required": ["tau", "sigma", "start", "stop"],
                    "additionalProperties": False,
                },
            ]
        },
        "companion": {"type": "boolean"},
        "solver": {"$ref": "#/definitions/solver"},
    },
    "required": ["format", "target", "sets", "density", "schedule"],
    "additionalProperties": False,
}
