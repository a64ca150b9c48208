"""JSON schema for CLI reports. ``python -m segalhh.schema`` prints it."""
import json

TABLE = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}

HH_RESULT = {
    "type": "object",
    "required": ["count", "compose_table", "tensor_table", "centre", "evaluation", "checks"],
    "properties": {
        "count": {"type": "integer", "minimum": 1},
        "compose_table": TABLE,
        "tensor_table": TABLE,
        "centre": {"type": "array", "items": {"type": "integer"}},
        "evaluation": {"type": "array", "items": {"type": "integer"}},
        "checks": {"type": "object", "additionalProperties": {"type": "boolean"}},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "segalhh report",
    "type": "object",
    "required": ["command", "status", "ok", "exit_code", "inputs", "result", "error"],
    "properties": {
        "command": {"type": "string"},
        "status": {"enum": ["ok", "check_failed", "input_error", "budget_exceeded"]},
        "ok": {"type": "boolean"},
        "exit_code": {"enum": [0, 1, 2, 3]},
        "inputs": {"type": "object"},
        "result": {"type": ["object", "null"]},
        "error": {
            "type": ["object", "null"],
            "required": ["kind", "message"],
            "properties": {"kind": {"type": "string"}, "message": {"type": "string"}},
        },
    },
    "allOf": [
        {"if": {"properties": {"command": {"const": "hh-pi0"}, "status": {"const": "ok"}}},
         "then": {"properties": {"result": HH_RESULT}}},
    ],
}

if __name__ == "__main__":
    print(json.dumps(REPORT_SCHEMA, indent=2, sort_keys=True))
