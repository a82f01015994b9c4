"""JSON schemas for verdict and sweep documents."""

SCHEMA_VERSION = 1

_SAMPLE = {
    "type": "object",
    "required": ["t", "p", "seed", "rank", "h0", "h1", "chi"],
    "properties": {k: {"type": "integer"} for k in ("t", "p", "seed", "rank", "h0", "h1", "chi")},
}

_EXPECTED = {
    "type": "object",
    "required": ["t", "h0", "h1", "w", "capacity"],
    "properties": {k: {"type": "integer"} for k in ("t", "h0", "h1", "w", "capacity")},
}

VERDICT_SCHEMA = {
    "type": "object",
    "required": ["schema", "eps", "t", "p", "seed", "expected", "override", "samples", "status"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "eps": {"type": "string"},
        "t": {"type": "integer", "minimum": 1},
        "p": {"type": "integer"},
        "seed": {"type": "integer"},
        "expected": _EXPECTED,
        "override": {
            "anyOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["eps", "t", "h0", "h1", "source", "deviates"],
                },
            ]
        },
        "samples": {"type": "array", "minItems": 1, "items": _SAMPLE},
        "status": {"enum": ["CertifiedMaxRank", "CertifiedException", "Inconclusive"]},
        "mismatch": {"type": "boolean"},
    },
}

SWEEP_SCHEMA = {
    "type": "object",
    "required": ["schema", "n", "k", "counts", "entries"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "counts": {
            "type": "object",
            "required": ["pass", "fail", "inconclusive", "exceptions"],
        },
        "entries": {"type": "array"},
    },
}
