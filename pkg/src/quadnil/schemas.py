"""JSON Schemas (draft 2020-12) for every document the command line reads or writes."""

RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
VAR = {"type": "string", "pattern": r"^a[1-9]\d*$"}
SYM_ENTRY = {"type": "string", "pattern": r"^(0|[+-]a[1-9]\d*)$"}
POLY = {"type": "string", "minLength": 1}

MATRIX = {
    "type": "object",
    "required": ["rows", "cols", "entries"],
    "additionalProperties": False,
    "properties": {
        "rows": {"type": "integer", "minimum": 0},
        "cols": {"type": "integer", "minimum": 0},
        "entries": {"type": "array", "items": {"type": "array", "items": POLY}},
    },
}

ASSIGNMENT = {
    "type": "object",
    "required": ["d", "values"],
    "additionalProperties": False,
    "properties": {
        "d": {"type": "integer", "minimum": 2},
        "values": {
            "type": "object",
            "propertyNames": {"pattern": r"^a[1-9]\d*$"},
            "additionalProperties": RATIONAL,
        },
    },
}

FAMILY = {
    "type": "object",
    "required": ["d", "matrices"],
    "additionalProperties": False,
    "properties": {
        "d": {"type": "integer", "minimum": 2},
        "matrices": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "array", "items": SYM_ENTRY}},
        },
    },
}

TABLE = {
    "type": "object",
    "required": ["d", "brackets"],
    "additionalProperties": False,
    "properties": {
        "d": {"type": "integer", "minimum": 2},
        "brackets": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["i", "j", "z"],
                "additionalProperties": False,
                "properties": {
                    "i": {"type": "integer", "minimum": 1},
                    "j": {"type": "integer", "minimum": 2},
                    "z": {"type": "array", "items": POLY},
                },
            },
        },
    },
}

RANK_REPORT = {
    "type": "object",
    "required": ["d", "assignment", "rank", "d_quadratic"],
    "additionalProperties": False,
    "properties": {
        "d": {"type": "integer", "minimum": 2},
        "assignment": ASSIGNMENT["properties"]["values"],
        "rank": {"type": "integer", "minimum": 0},
        "d_quadratic": {"type": "boolean"},
    },
}

CHECK_REPORT = {
    "type": "object",
    "required": [
        "d", "pad", "cond1", "cond2", "cond3", "cond4", "rank", "d_quadratic",
        "invariance", "bi_type", "isotropic_index", "reduced",
    ],
    "additionalProperties": False,
    "properties": {
        "d": {"type": "integer", "minimum": 2},
        "pad": {"type": "integer", "minimum": 0},
        "cond1": {"type": "boolean"},
        "cond2": {"type": "boolean"},
        "cond3": {"type": "boolean"},
        "cond4": {"type": "boolean"},
        "rank": {"type": "integer", "minimum": 0},
        "d_quadratic": {"type": "boolean"},
        "invariance": {"type": ["boolean", "null"]},
        "bi_type": {
            "oneOf": [
                {"type": "null"},
                {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
            ]
        },
        "isotropic_index": {"type": ["integer", "null"]},
        "reduced": {"type": ["boolean", "null"]},
    },
}

MINOR_PROOF = {
    "type": "object",
    "required": ["order", "minors_total", "minors_expanded", "minors_structural", "statement"],
    "additionalProperties": False,
    "properties": {
        "order": {"type": "integer", "minimum": 1},
        "minors_total": {"type": "integer", "minimum": 0},
        "minors_expanded": {"type": "integer", "minimum": 0},
        "minors_structural": {"type": "integer", "minimum": 0},
        "statement": {"type": "string"},
    },
}

SUPPORT_CERTIFICATE = {
    "type": "object",
    "required": ["support", "verdict"],
    "additionalProperties": False,
    "properties": {
        "support": {"type": "array", "items": VAR},
        "verdict": {"enum": ["ACHIEVES_RANK_d", "CANNOT"]},
        "witness": {"type": "object", "additionalProperties": RATIONAL},
        "proof": MINOR_PROOF,
    },
    "oneOf": [
        {"properties": {"verdict": {"const": "ACHIEVES_RANK_d"}}, "required": ["witness"]},
        {"properties": {"verdict": {"const": "CANNOT"}}, "required": ["proof"]},
    ],
}

SEARCH_RESULT = {
    "type": "object",
    "required": ["d", "min_support", "achieving", "achieving_total", "refuted", "certificates"],
    "additionalProperties": False,
    "properties": {
        "d": {"type": "integer", "minimum": 2},
        "min_support": {
            "oneOf": [{"type": "integer", "minimum": 1}, {"const": "IMPOSSIBLE"}, {"type": "null"}]
        },
        "achieving": {"type": "array", "items": {"type": "array", "items": VAR}},
        "achieving_total": {"type": "integer", "minimum": 0},
        "refuted": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
        "certificates": {"type": "array", "items": SUPPORT_CERTIFICATE},
    },
}

IMPOSSIBILITY = {
    "type": "object",
    "required": ["d", "minors_total", "all_zero", "verdict", "minors"],
    "additionalProperties": False,
    "properties": {
        "d": {"type": "integer", "minimum": 2},
        "minors_total": {"type": "integer", "minimum": 0},
        "all_zero": {"type": "boolean"},
        "verdict": {"enum": ["ACHIEVES_RANK_d", "CANNOT"]},
        "minors": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["columns", "value"],
                "additionalProperties": False,
                "properties": {
                    "columns": {"type": "array", "items": {"type": "string"}},
                    "value": POLY,
                },
            },
        },
    },
}

ISO_REPORT = {
    "type": "object",
    "required": ["match", "residual_nonzeros"],
    "additionalProperties": False,
    "properties": {
        "match": {"type": "boolean"},
        "residual_nonzeros": {"type": "integer", "minimum": 0},
    },
}

# schema of the JSON document each command emits
BY_COMMAND = {
    "family": FAMILY,
    "bmatrix": MATRIX,
    "table": TABLE,
    "check": CHECK_REPORT,
    "rank": RANK_REPORT,
    "search": SEARCH_RESULT,
    "iso": ISO_REPORT,
    "hat": MATRIX,
    "certify": IMPOSSIBILITY,
    "certify-support": SUPPORT_CERTIFICATE,
}
