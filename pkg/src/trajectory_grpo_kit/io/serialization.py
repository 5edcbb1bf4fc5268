"""
JSON serialization helpers.

Converts numpy scalars/arrays, enums, dataclasses and paths into plain JSON
values so metrics records and checkpoint headers can be written with
``json.dumps(..., default=_json_serializer)``. Floats keep their ``repr``
form, so a value written and read back is bit-identical.
"""

import dataclasses
import json
from enum import Enum
from pathlib import PurePath
from typing import Any, Mapping

import numpy as np

from ..core.exceptions import InvalidInputError


def _serialize_value(value: Any) -> Any:
    """Serialize a single value to a JSON-compatible value.

    Args:
        value: Value to serialize

    Returns:
        JSON-compatible value (unchanged when no conversion applies)
    """
    if value is None:
        return None

    # bool before int: bool is an int subclass
    if isinstance(value, (bool, np.bool_)):
        return bool(value)

    if isinstance(value, (str, int, float)) and not isinstance(value, np.floating):
        return value

    if isinstance(value, np.integer):
        return int(value)

    if isinstance(value, np.floating):
        return float(value)

    if isinstance(value, np.ndarray):
        return value.tolist()

    if isinstance(value, Enum):
        return value.value

    if isinstance(value, PurePath):
        return str(value)

    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: _serialize_value(getattr(value, f.name)) for f in dataclasses.fields(value)}

    if isinstance(value, (tuple, list)):
        return [_serialize_value(item) for item in value]

    if isinstance(value, (set, frozenset)):
        return sorted(_serialize_value(item) for item in value)

    if isinstance(value, Mapping):
        return {str(k): _serialize_value(v) for k, v in value.items()}

    return value


def _json_serializer(obj: Any) -> Any:
    """``default=`` hook for json.dumps.

    Raises:
        TypeError: If object cannot be serialized
    """
    result = _serialize_value(obj)

    if result is obj and not isinstance(obj, (str, int, float, bool, list, dict, type(None))):
        raise TypeError(f"Object of type {type(obj)} is not JSON serializable")

    return result


def to_json_line(record: Mapping[str, Any]) -> str:
    """Compact, key-sorted JSON text for ``record`` (no trailing newline).

    Raises:
        InvalidInputError: record holds NaN/inf or an unserializable value
    """
    try:
        return json.dumps(
            _serialize_value(record),
            sort_keys=True,
            separators=(",", ":"),
            allow_nan=False,
            default=_json_serializer,
            ensure_ascii=False,
        )
    except (TypeError, ValueError) as e:
        raise InvalidInputError(field_name="record", expected="finite JSON-serializable values", message=f"Record is not serializable: {e}") from e
