# taxonomy.py
from codec import SCHEMA_VERSION

RATIONAL_PATTERN = r"^-?\d+(/\d+)?$"
LABELS = ["a", "b", "c"]


def value_schema() -> dict:
    return {
        "oneOf": [
            {"type": "string", "pattern": RATIONAL_PATTERN},
            {
                "type": "object",
                "properties": {
                    "poly": {"type": "array", "items": {"type": "integer"}, "minItems": 2},
                    "interval": {
                        "type": "array",
                        "items": {"type": "string", "pattern": RATIONAL_PATTERN},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                    "coeffs": {
                        "type": "array",
                        "items": {"type": "string", "pattern": RATIONAL_PATTERN},
                    },
                },
                "required": ["poly", "interval", "coeffs"],
                "additionalProperties": False,
            },
        ]
    }


def _nullable(schema: dict) -> dict:
    return {"oneOf": [{"type": "null"}, schema]}


def interval_schema() -> dict:
    return {"type": "array", "items": value_schema(), "minItems": 2, "maxItems": 2}


def params_schema() -> dict:
    return {"type": "array", "items": value_schema(), "minItems": 4, "maxItems": 4}


def matrix_schema() -> dict:
    row = {"type": "array", "items": {"type": "integer"}, "minItems": 4, "maxItems": 4}
    return {"type": "array", "items": row, "minItems": 4, "maxItems": 4}


def case_schema() -> dict:
    return {
        "type": "object",
        "properties": {
            "index": {"type": "integer", "minimum": 1, "maximum": 8},
            "branch": {"enum": [None, "a", "b", "between"]},
        },
        "required": ["index", "branch"],
        "additionalProperties": False,
    }


def counts_schema() -> dict:
    return {
        "type": "object",
        "properties": {k: {"type": "integer"} for k in ("k", "n", "m", "x", "y")},
        "additionalProperties": False,
    }


def system_schema() -> dict:
    return {
        "type": "object",
        "properties": {
            "support": interval_schema(),
            "pairs": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "left": interval_schema(),
                        "right": interval_schema(),
                        "label": {"type": "string"},
                    },
                    "required": ["left", "right", "label"],
                    "additionalProperties": False,
                },
            },
        },
        "required": ["support", "pairs"],
        "additionalProperties": False,
    }


def step_schema() -> dict:
    member = {"enum": [None, "left", "right"]}
    return {
        "type": "object",
        "properties": {
            "kind": {"enum": ["transmission", "reduction"]},
            "side": {"enum": ["left", "right"]},
            "iteration": {"type": "integer", "minimum": 0},
            "moved_pair": {"type": "string"},
            "moved_member": member,
            "along_pair": {"type": ["string", "null"]},
            "along_member": member,
            "cut_point": _nullable(value_schema()),
            "support_after": interval_schema(),
        },
        "required": ["kind", "side", "moved_pair", "support_after"],
        "additionalProperties": False,
    }


def trace_schema() -> dict:
    return {
        "type": "object",
        "properties": {
            "initial": system_schema(),
            "steps": {"type": "array", "items": step_schema()},
            "final": system_schema(),
            "outcome": {"enum": ["hole", "symmetric", "step_cap", "degenerate"]},
            "side": {"enum": ["left", "right"]},
            "detail": {"type": ["string", "null"]},
        },
        "required": ["initial", "steps", "final", "outcome"],
        "additionalProperties": False,
    }


def _document(command: str, properties: dict, required: list[str]) -> dict:
    return {
        "type": "object",
        "properties": {
            "schema_version": {"const": SCHEMA_VERSION},
            "command": {"const": command},
            **properties,
        },
        "required": ["schema_version", "command", *required],
        "additionalProperties": False,
    }


def matrix_record_schema() -> dict:
    return {
        "type": "object",
        "properties": {
            "provenance": {"type": "string"},
            "entries": matrix_schema(),
            "determinant": {"type": "integer"},
        },
        "required": ["provenance", "entries"],
        "additionalProperties": False,
    }


def symmetrization_schema() -> dict:
    return {
        "type": "object",
        "properties": {
            "params": params_schema(),
            "case": _nullable(case_schema()),
            "counts": counts_schema(),
            "matrix": _nullable(matrix_schema()),
            "predicted": {"enum": ["symmetric", "hole", "degenerate"]},
            "engine": {"enum": ["symmetric", "hole", "degenerate"]},
            "engine_params": _nullable(params_schema()),
            "agree": {"type": "boolean"},
            "generalized_iterations": {"type": "integer", "minimum": 0},
            "ordinary_iterations": {"type": "integer", "minimum": 0},
            "route": {"type": "string"},
            "findings": {"type": "array", "items": {"type": "string"}},
        },
        "required": ["params", "case", "counts", "matrix", "engine_params", "agree", "generalized_iterations"],
        "additionalProperties": False,
    }


def classify_schema() -> dict:
    return _document(
        "classify",
        {
            "params": params_schema(),
            "case": case_schema(),
            "hole": {"type": "boolean"},
            "gaps": {"type": "array", "items": interval_schema()},
            "chain": {"type": "array", "items": {"type": "string"}, "minItems": 8, "maxItems": 8},
            "counts": counts_schema(),
            "genericity_relation": _nullable(
                {"type": "array", "items": {"type": "integer"}, "minItems": 4, "maxItems": 4}
            ),
            "candidates": {"type": "array", "items": matrix_record_schema()},
        },
        ["params", "case", "hole", "chain", "counts", "candidates"],
    )


def induce_schema() -> dict:
    return _document(
        "induce",
        {
            "params": _nullable(params_schema()),
            "trace": trace_schema(),
            "route": {"type": "array", "items": {"type": "string"}},
            "generalized": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "reduced_pair": {"type": "string"},
                        "start": {"type": "integer"},
                        "stop": {"type": "integer"},
                        "ordinary": {"type": "integer"},
                    },
                    "required": ["reduced_pair", "start", "stop", "ordinary"],
                    "additionalProperties": False,
                },
            },
        },
        ["trace", "route", "generalized"],
    )


def symmetrize_schema() -> dict:
    return _document(
        "symmetrize",
        {
            "params": params_schema(),
            "result": {"enum": ["symmetric", "hole", "degenerate"]},
            "params_after": _nullable(params_schema()),
            "generalized_iterations": {"type": "integer", "minimum": 0},
            "ordinary_iterations": {"type": "integer", "minimum": 0},
            "route": {"type": "array", "items": {"type": "string"}},
            "matrix": _nullable(matrix_record_schema()),
        },
        ["params", "result", "params_after", "generalized_iterations"],
    )


def orbit_schema() -> dict:
    return _document(
        "orbit",
        {
            "params": params_schema(),
            "point": value_schema(),
            "status": {"enum": ["exhausted", "truncated"]},
            "size": {"type": "integer", "minimum": 1},
            "points": {"type": "array", "items": value_schema()},
            "edges": {
                "type": "array",
                "items": {
                    "type": "array",
                    "prefixItems": [value_schema(), value_schema(), {"type": "string"}],
                    "minItems": 3,
                    "maxItems": 3,
                },
            },
        },
        ["params", "point", "status", "size", "points"],
    )


def thin_report_schema() -> dict:
    return {
        "type": "object",
        "properties": {
            "depth": {"type": "integer", "minimum": 0},
            "support_lengths": {"type": "array", "items": value_schema(), "minItems": 1},
            "support_approx": {"type": "array", "items": {"type": "string"}},
            "hole_found": {"type": "boolean"},
            "self_similar_period": {"type": ["integer", "null"]},
            "scale_factor": _nullable(value_schema()),
            "stop_reason": {"enum": ["hole", "epsilon", "cap"]},
            "verdict": {"enum": ["thin", "hole", "inconclusive"]},
            "ordinary_iterations": {"type": "integer", "minimum": 0},
            "rounds": {"type": "array", "items": {"type": "string"}},
            "period_rounds": {"type": ["integer", "null"], "minimum": 1},
        },
        "required": ["depth", "support_lengths", "hole_found", "self_similar_period", "scale_factor"],
        "additionalProperties": False,
    }


def scan_schema() -> dict:
    return _document("scan", {"params": params_schema(), "report": thin_report_schema()}, ["params", "report"])


def thin_check_schema() -> dict:
    leg = {
        "type": "object",
        "properties": {
            "case": case_schema(),
            "counts": counts_schema(),
            "ordinary": {"type": "integer"},
            "generalized": {"type": "integer"},
        },
        "required": ["case", "counts", "ordinary", "generalized"],
        "additionalProperties": False,
    }
    return _document(
        "thin-check",
        {
            "lambda": {
                "type": "object",
                "properties": {
                    "minimal_poly": {"type": "array", "items": {"type": "integer"}},
                    "interval": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
                    "approx": {"type": "string"},
                },
                "required": ["minimal_poly", "interval", "approx"],
                "additionalProperties": False,
            },
            "charpoly": {"type": "array", "items": {"type": "integer"}},
            "eigenvector": params_schema(),
            "eigenvector_approx": {"type": "array", "items": {"type": "string"}},
            "self_similar": {"type": "boolean"},
            "detail": {"type": "string"},
            "matrix_product": {
                "type": "object",
                "properties": {
                    "holds": {"type": "boolean"},
                    "product": matrix_schema(),
                    "factors": {"type": "array", "items": {"type": "string"}},
                },
                "required": ["holds", "product", "factors"],
                "additionalProperties": False,
            },
            "case_route": {"type": "array", "items": leg},
            "scan": thin_report_schema(),
            "passed": {"type": "boolean"},
        },
        ["lambda", "eigenvector", "self_similar", "matrix_product", "case_route", "passed"],
    )


def verify_schema() -> dict:
    return _document(
        "verify",
        {
            "samples": {"type": "integer", "minimum": 0},
            "seed": {"type": "integer", "minimum": 0},
            "height": {"type": "integer", "minimum": 1},
            "agreements": {"type": "integer", "minimum": 0},
            "symmetric": {"type": "integer", "minimum": 0},
            "holes": {"type": "integer", "minimum": 0},
            "degenerate": {"type": "integer", "minimum": 0},
            "max_generalized": {"type": "integer", "minimum": 0},
            "case_counts": {"type": "object", "additionalProperties": {"type": "integer"}},
            "mismatches": {"type": "array", "items": symmetrization_schema()},
            "findings": {"type": "array", "items": {"type": "string"}},
            "thin": {"type": ["boolean", "null"]},
            "passed": {"type": "boolean"},
        },
        ["samples", "seed", "agreements", "mismatches", "passed"],
    )


def log_schema() -> dict:
    run = {
        "type": "object",
        "properties": {
            "command": {"type": "string"},
            "result": {"enum": ["ok", "mismatch", "degenerate", "error"]},
            "exit_code": {"type": "integer"},
            "latency_ms": {"type": "number", "minimum": 0},
        },
        "required": ["command"],
    }
    return _document(
        "log",
        {
            "log_file": {"type": "string"},
            "filter": {"type": ["string", "null"]},
            "records": {"type": "array", "items": run},
        },
        ["log_file", "records"],
    )


SCHEMAS = {
    "classify": classify_schema,
    "induce": induce_schema,
    "symmetrize": symmetrize_schema,
    "orbit": orbit_schema,
    "scan": scan_schema,
    "thin-check": thin_check_schema,
    "verify": verify_schema,
    "log": log_schema,
}


def build_schema(command: str) -> dict:
    try:
        return SCHEMAS[command]()
    except KeyError as e:
        raise ValueError(f"no schema for command {command!r}") from e
