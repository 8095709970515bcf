"""JSON Schemas for everything the CLI writes with ``--json`` (schema version 1)."""

RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+/\d+$"}]}

SPACE = {
    "type": "object",
    "required": ["n", "a", "c2_mode", "derived"],
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "a": {"type": "array", "items": {"enum": [0, 1]}},
        "c2_mode": {"enum": ["paper", "normalized"]},
        "derived": {
            "type": "object",
            "required": ["A", "e", "sgn"],
            "properties": {"A": {"type": "integer"}, "e": {"type": "integer"},
                           "sgn": {"type": "integer"}},
        },
        "overrides": {"type": "object"},
    },
}

PARAMS = {
    "type": "object",
    "required": ["n", "a", "c2_mode", "r", "b", "k"],
    "properties": {
        "n": {"type": "integer"}, "a": {"type": "array"}, "c2_mode": {"type": "string"},
        "r": {"type": "integer", "minimum": 1},
        "b": {"type": "array", "items": {"type": "integer"}},
        "k": {"type": "integer"},
    },
}

_SWEEP_CASE = {
    "type": "object",
    "required": ["params", "route", "space", "chi_S", "chi_Sbar", "diff", "dim", "integral", "ok"],
    "properties": {
        "params": PARAMS, "route": {"enum": ["standard", "paper"]}, "space": SPACE,
        "chi_S": RATIONAL, "chi_Sbar": RATIONAL, "diff": RATIONAL,
        "dim": {"type": ["integer", "null"]}, "integral": {"type": "boolean"},
        "ok": {"type": "boolean"},
    },
}

_CHECK_CASE = {
    "type": "object",
    "required": ["space", "ok"],
    "properties": {"space": SPACE, "ok": {"type": "boolean"}},
}

REPORT = {
    "type": "object",
    "required": ["schema", "config", "cases", "pass", "counterexamples"],
    "properties": {
        "schema": {"const": 1},
        "config": {"type": "object"},
        "cases": {"type": "array", "items": {"anyOf": [_SWEEP_CASE, _CHECK_CASE]}},
        "pass": {"type": "boolean"},
        "counterexamples": {"type": "array"},
    },
}

DIMENSION = {
    "type": "object",
    "required": ["schema", "space", "params", "dim", "chi", "integral", "real_dim"],
    "properties": {
        "schema": {"const": 1}, "space": SPACE, "params": PARAMS,
        "dim": {"type": "integer"}, "chi": RATIONAL, "integral": {"const": True},
        "real_dim": {"type": "integer"}, "advisory": {"type": "string"},
    },
}

CHI = {
    "type": "object",
    "required": ["schema", "space", "params", "values"],
    "properties": {
        "schema": {"const": 1}, "space": SPACE, "params": PARAMS,
        "values": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["route", "divisor", "chi", "integral"],
                "properties": {"route": {"enum": ["standard", "paper"]},
                               "divisor": {"enum": ["S", "Sbar"]},
                               "chi": RATIONAL, "integral": {"type": "boolean"}},
            },
        },
    },
}

TABLE = {
    "type": "object",
    "required": ["schema", "vary", "rows"],
    "properties": {
        "schema": {"const": 1},
        "vary": {"enum": ["k", "r", "n"]},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["params", "space", "dim", "chi", "real_dim", "chi_OP"],
                "properties": {"params": PARAMS, "space": SPACE,
                               "dim": {"type": ["integer", "null"]}, "chi": RATIONAL,
                               "real_dim": {"type": ["integer", "null"]}, "chi_OP": RATIONAL},
            },
        },
    },
}

EVAL = {
    "type": "object",
    "required": ["schema", "outputs", "pass"],
    "properties": {
        "schema": {"const": 1},
        "outputs": {"type": "array", "items": {
            "type": "object", "required": ["statement", "kind", "text"]}},
        "pass": {"type": "boolean"},
        "error": {"type": "object"},
    },
}
