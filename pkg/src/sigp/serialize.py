"""Shared JSON model-file envelope: stable float text and atomic writes.

All model files are JSON objects with a leading "format" tag, one top-level
key per line, and floats printed with 17 significant digits so that a
save/load/save cycle is byte identical.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .errors import DataError

__all__ = ["fmt_value", "doc_text", "write_atomic", "read_doc", "require"]


def fmt_value(value) -> str:
    """Render one JSON value; floats keep full double precision."""
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if isinstance(value, dict):
        items = ",".join(f"{json.dumps(k)}:{fmt_value(v)}" for k, v in value.items())
        return "{" + items + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ",".join(fmt_value(v) for v in np.ravel(value)) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def doc_text(doc: dict) -> str:
    """Render a top-level document, one key per line, in insertion order."""
    lines = [f"{json.dumps(k)}:{fmt_value(v)}" for k, v in doc.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def write_atomic(path, text: str):
    """Write text to path via a temp file + rename in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_doc(path, expected_format: str) -> dict:
    """Read and parse a model file, checking its format tag."""
    with open(path, "r") as handle:
        text = handle.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"not a valid model file: {exc}") from exc
    if not isinstance(doc, dict):
        raise DataError("not a valid model file: top level is not an object")
    fmt = require(doc, "format")
    if fmt != expected_format:
        raise DataError(f"unsupported model format {fmt!r}")
    return doc


def require(doc, key):
    if key not in doc:
        raise DataError(f"model file is missing field {key!r}")
    return doc[key]
