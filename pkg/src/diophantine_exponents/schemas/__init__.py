"""
JSON Schemas for structured inputs and reports.

Schemas ship inside the package and are validated on load.
"""

import json
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema

from diophantine_exponents.common.exceptions import SchemaError

SCHEMA_NAMES = ("lie_algebra", "lie_element", "manifold", "report")


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict[str, Any]:
    """Load a bundled schema by short name (e.g. "manifold")."""
    if name not in SCHEMA_NAMES:
        raise SchemaError(f"Unknown schema '{name}'", "schemas")
    text = resources.files(__name__).joinpath(f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_payload(payload: Any, name: str) -> None:
    """
    Validate a decoded JSON payload.

    Raises:
        SchemaError: With the JSON path of the first violation
    """
    try:
        jsonschema.validate(instance=payload, schema=load_schema(name))
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path)
        raise SchemaError(e.message, f"schemas.{name}", path=path or "/") from e
