"""
canonical.py

Canonical JSON for reports.

Reports mix python floats, numpy scalars and arrays, enums, tuples and
the occasional non-finite number. to_jsonable maps all of them onto plain
JSON values; canonical_json fixes key order and separators so equal
reports serialise to equal bytes.
"""

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Union

import numpy as np


def _float(x: float) -> Union[float, str]:
    if math.isnan(x):
        return 'nan'
    if math.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return x


def to_jsonable(obj: Any) -> Any:
    """Recursively convert obj to JSON-native values (non-finite floats become strings)"""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Enum):
        return to_jsonable(obj.value)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, 'to_dict'):
        return to_jsonable(obj.to_dict())
    raise TypeError(f"Object of type {type(obj).__name__} is not report-serialisable")


def canonical_json(obj: Any) -> str:
    """Compact, key-sorted JSON used for hashing"""
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(',', ':'), allow_nan=False)


def pretty_json(obj: Any) -> str:
    """Key-sorted, indented JSON used for files"""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + '\n'


def write_json(obj: Any, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(pretty_json(obj), encoding='utf-8')
    return path
