"""
JSON wire format for sequences, matrices and coefficient files
Complex numbers are always two-element [re, im] arrays
"""

import json
import math
from numbers import Real
from typing import Any, List, Union

import numpy as np

from domain.exceptions import ParsingError, SchemaError
from domain.models import CoefficientSequence, FiniteSequence, Matrix


def _load(raw: Union[bytes, str]) -> Any:
    try:
        text = raw.decode('utf-8') if isinstance(raw, (bytes, bytearray)) else raw
        return json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ParsingError(f"Malformed JSON: {e}") from e


def _is_number(value: Any) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool)


def _complex_from_pair(pair: Any, where: str) -> complex:
    if not isinstance(pair, list) or len(pair) != 2 or not all(_is_number(x) for x in pair):
        raise SchemaError(f"{where}: expected [re, im] pair of numbers, got {pair!r}")
    re, im = float(pair[0]), float(pair[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise SchemaError(f"{where}: non-finite entry {pair!r}")
    return complex(re, im)


def _pairs(values: np.ndarray) -> List[List[float]]:
    return [[float(z.real), float(z.imag)] for z in values]


def parse_finite(raw: Union[bytes, str]) -> FiniteSequence:
    """
    Parse a finite sequence document.

    Schema: {"dimension": int, "vectors": [[[re, im], ...], ...], "label": str (optional)}

    Raises:
        ParsingError: If the JSON is malformed
        SchemaError: If the document does not follow the schema
    """
    doc = _load(raw)
    if not isinstance(doc, dict):
        raise SchemaError("Sequence document must be a JSON object")

    dimension = doc.get("dimension")
    if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 1:
        raise SchemaError(f"'dimension' must be a positive integer, got {dimension!r}")

    vectors = doc.get("vectors")
    if not isinstance(vectors, list) or not vectors:
        raise SchemaError("'vectors' must be a non-empty array")

    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise SchemaError("'label' must be a string")

    parsed = []
    for k, vector in enumerate(vectors):
        if not isinstance(vector, list):
            raise SchemaError(f"vectors[{k}] must be an array")
        if len(vector) != dimension:
            raise SchemaError(f"vectors[{k}] has length {len(vector)}, expected {dimension}")
        parsed.append(np.array(
            [_complex_from_pair(pair, f"vectors[{k}][{i}]") for i, pair in enumerate(vector)],
            dtype=np.complex128,
        ))

    return FiniteSequence(dimension=dimension, vectors=tuple(parsed), label=label)


def serialize_finite(seq: FiniteSequence) -> bytes:
    """Canonical JSON encoding (sorted keys, no whitespace)"""
    doc = {
        "dimension": seq.dimension,
        "vectors": [_pairs(vector) for vector in seq.vectors],
    }
    if seq.label is not None:
        doc["label"] = seq.label
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode('utf-8')


def parse_matrix(raw: Union[bytes, str]) -> Matrix:
    """
    Parse a matrix document {"rows": r, "cols": c, "entries": [[re, im], ...]} (row-major).
    """
    doc = _load(raw)
    if not isinstance(doc, dict):
        raise SchemaError("Matrix document must be a JSON object")
    rows, cols, entries = doc.get("rows"), doc.get("cols"), doc.get("entries")
    for name, value in (("rows", rows), ("cols", cols)):
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise SchemaError(f"'{name}' must be a positive integer, got {value!r}")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise SchemaError(f"'entries' must hold rows*cols = {rows * cols} pairs")
    values = [_complex_from_pair(pair, f"entries[{i}]") for i, pair in enumerate(entries)]
    return Matrix(np.array(values, dtype=np.complex128).reshape(rows, cols))


def serialize_matrix(m: Matrix) -> bytes:
    doc = {"rows": m.rows, "cols": m.cols, "entries": _pairs(m.entries)}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode('utf-8')


def parse_coefficients(raw: Union[bytes, str], label: str) -> CoefficientSequence:
    """
    Parse a finitely supported coefficient document {"values": [[re, im], ...]}.
    """
    doc = _load(raw)
    if not isinstance(doc, dict) or not isinstance(doc.get("values"), list) or not doc["values"]:
        raise SchemaError("Coefficient document must be an object with a non-empty 'values' array")
    values = [_complex_from_pair(pair, f"values[{i}]") for i, pair in enumerate(doc["values"])]
    return CoefficientSequence.from_values(values, label=label)
