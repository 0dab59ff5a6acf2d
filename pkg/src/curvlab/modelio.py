"""JSON model files: dense or sparse (symmetry-completed) curvature tensors.

The format is {"dim": m, "J": [[...]], "A": {"storage": "dense"|"sparse",
"entries": ...}, "metadata": {...}}.  Dense entries are the nested m^4 array
and round-trip bit-exactly; sparse entries are [i, j, k, l, value] records
(0-based indices), one per symmetry orbit, and the loader materializes each
orbit and rejects conflicting values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CurvlabError, SparseEntryConflictError
from .spaces import DEFAULT_TOL, validate_complex_structure
from .tensors import ComplexModel, validate_or_project

SPARSE_CONFLICT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ModelFile:
    """A loaded model plus its free-form string metadata."""

    model: ComplexModel
    metadata: dict


def _orbit(i: int, j: int, k: int, l: int):
    # Sign orbit under first-pair swap (-), last-pair swap (-) and pair exchange (+).
    return (
        ((i, j, k, l), 1.0),
        ((j, i, k, l), -1.0),
        ((i, j, l, k), -1.0),
        ((j, i, l, k), 1.0),
        ((k, l, i, j), 1.0),
        ((l, k, i, j), -1.0),
        ((k, l, j, i), -1.0),
        ((l, k, j, i), 1.0),
    )


def _complete_sparse(dim: int, items) -> np.ndarray:
    entries = np.zeros((dim,) * 4)
    seen = np.zeros((dim,) * 4, dtype=bool)
    for item in items:
        if len(item) != 5:
            raise CurvlabError(f"sparse entry {item!r} is not [i, j, k, l, value]")
        i, j, k, l = (int(v) for v in item[:4])
        value = float(item[4])
        for quad, sign in _orbit(i, j, k, l):
            if any(q < 0 or q >= dim for q in quad):
                raise CurvlabError(f"sparse entry index {quad} out of range for dim {dim}")
            implied = sign * value
            if seen[quad] and abs(entries[quad] - implied) > SPARSE_CONFLICT_TOL:
                raise SparseEntryConflictError(
                    f"orbit of {(i, j, k, l)} implies {implied} at {quad}, "
                    f"but {entries[quad]} was already stored"
                )
            entries[quad] = implied
            seen[quad] = True
    return entries


def _sparse_items(entries: np.ndarray) -> list[list]:
    items = []
    for quad in np.argwhere(entries != 0.0):
        i, j, k, l = (int(v) for v in quad)
        rep = min(q for q, _ in _orbit(i, j, k, l))
        if (i, j, k, l) == rep:
            items.append([i, j, k, l, float(entries[i, j, k, l])])
    return items


def save_model(
    model: ComplexModel,
    path,
    storage: str = "dense",
    metadata: dict | None = None,
) -> None:
    """Write a model file; dense storage round-trips bit-exactly."""
    if storage == "dense":
        payload = {"storage": "dense", "entries": model.tensor.entries.tolist()}
    elif storage == "sparse":
        payload = {"storage": "sparse", "entries": _sparse_items(model.tensor.entries)}
    else:
        raise CurvlabError(f"unknown storage {storage!r}, expected 'dense' or 'sparse'")
    doc = {
        "dim": model.dim,
        "J": model.structure.matrix.tolist(),
        "A": payload,
        "metadata": {str(k): str(v) for k, v in (metadata or {}).items()},
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_model(path, tol: float = DEFAULT_TOL) -> ModelFile:
    """Read and strictly validate a model file."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CurvlabError(f"{path}: not valid JSON: {exc}") from exc
    for key in ("dim", "J", "A"):
        if key not in doc:
            raise CurvlabError(f"{path}: missing required key {key!r}")
    dim = int(doc["dim"])
    structure = validate_complex_structure(np.asarray(doc["J"], dtype=float), tol)
    if structure.dim != dim:
        raise CurvlabError(f"{path}: J is {structure.dim}x{structure.dim} but dim = {dim}")
    block = doc["A"]
    storage = block.get("storage")
    if storage == "dense":
        raw = np.asarray(block["entries"], dtype=float)
        if raw.shape != (dim,) * 4:
            raise CurvlabError(f"{path}: dense entries have shape {raw.shape}, expected {(dim,) * 4}")
    elif storage == "sparse":
        raw = _complete_sparse(dim, block["entries"])
    else:
        raise CurvlabError(f"{path}: unknown storage {storage!r}")
    tensor = validate_or_project(raw, mode="strict", tol=tol)
    return ModelFile(ComplexModel(structure, tensor), dict(doc.get("metadata", {})))


def save_matrix(matrix: np.ndarray, path, key: str = "theta") -> None:
    Path(path).write_text(json.dumps({key: np.asarray(matrix).tolist()}, indent=2) + "\n")


def load_matrix(path, key: str = "theta") -> np.ndarray:
    doc = json.loads(Path(path).read_text())
    if isinstance(doc, dict):
        if key not in doc:
            raise CurvlabError(f"{path}: missing key {key!r}")
        return np.asarray(doc[key], dtype=float)
    return np.asarray(doc, dtype=float)
