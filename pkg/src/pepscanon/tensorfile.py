"""JSON interchange format for tensors, MPS/PEPS specs and matrices."""
from __future__ import annotations

import json
from math import prod

import numpy as np

from .lattice import MpsSpec, PepsSpec

FORMAT = "pepscanon-tensor"
VERSION = 1
KINDS = ("mps", "peps", "matrix")


class TensorFileError(ValueError):
    """Malformed tensor document; the message names the offending position."""


def dumps(array, kind: str, meta: dict | None = None) -> str:
    arr = np.asarray(array, dtype=complex)
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("only finite entries can be serialized")
    doc = {
        "format": FORMAT,
        "version": VERSION,
        "kind": kind,
        "shape": list(arr.shape),
        "entries": [[float(z.real), float(z.imag)] for z in arr.ravel()],
        "meta": dict(meta or {}),
    }
    return json.dumps(doc, indent=1)


def loads(text: str):
    """Parse a document; returns ``(array, kind, meta)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TensorFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise TensorFileError("top level: expected a JSON object")
    if doc.get("format") != FORMAT:
        raise TensorFileError(f"field 'format': expected {FORMAT!r}, got {doc.get('format')!r}")
    if doc.get("version") != VERSION:
        raise TensorFileError(f"field 'version': unsupported version {doc.get('version')!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise TensorFileError(f"field 'kind': expected one of {KINDS}, got {kind!r}")
    shape = doc.get("shape")
    if not isinstance(shape, list) or not shape or not all(isinstance(n, int) and n > 0 for n in shape):
        raise TensorFileError("field 'shape': expected a nonempty list of positive integers")
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise TensorFileError("field 'entries': expected a list of [re, im] pairs")
    if len(entries) != prod(shape):
        raise TensorFileError(f"field 'entries': {len(entries)} entries for shape {shape} (needs {prod(shape)})")
    values = np.empty(len(entries), dtype=complex)
    for k, pair in enumerate(entries):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise TensorFileError(f"entries[{k}]: expected a [re, im] pair of numbers, got {pair!r}")
        values[k] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise TensorFileError(f"entries[{bad}]: non-finite value")
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise TensorFileError("field 'meta': expected an object")
    expected = {"mps": 3, "peps": 5, "matrix": 2}[kind]
    if len(shape) != expected:
        raise TensorFileError(f"field 'shape': a {kind} needs {expected} axes, got {len(shape)}")
    return values.reshape(shape), kind, meta


def read(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write(path, array, kind, meta=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(array, kind, meta))
        fh.write("\n")


def spec_to_text(spec, name: str | None = None) -> str:
    if isinstance(spec, MpsSpec):
        if spec.boundary != "periodic":
            raise ValueError("only translation-invariant MPS are serialized")
        meta = {"boundary": "periodic", "d": spec.d, "D": spec.D}
        kind = "mps"
    else:
        meta = {"boundary": "torus", "d": spec.d, "D_h": spec.Dh, "D_v": spec.Dv,
                "rows": spec.rows, "cols": spec.cols}
        kind = "peps"
    if name:
        meta["name"] = name
    return dumps(spec.tensor, kind, meta)


def spec_from_document(array, kind, meta):
    if kind == "mps":
        return MpsSpec.uniform(array)
    if kind == "peps":
        return PepsSpec(array, int(meta.get("rows", 2)), int(meta.get("cols", 2)))
    raise TensorFileError(f"field 'kind': expected an mps or peps, got {kind!r}")


def read_spec(path):
    return spec_from_document(*read(path))


def read_matrix(path) -> np.ndarray:
    array, kind, _ = read(path)
    if kind != "matrix":
        raise TensorFileError(f"field 'kind': expected a matrix, got {kind!r}")
    return array
