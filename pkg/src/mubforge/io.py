"""JSON document format for matrices, MUB sets, solution sets and reports.

Payload entries are [re, im] doubles (lossless round trip via repr); when
exact Butson phase tags exist an auxiliary "phases" field carries them as
rational turns.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .catalogue import HadamardMatrix, phase_turns
from .core import InputError

FORMAT_VERSION = "1.0"
KINDS = ("matrix", "mubset", "solutionset", "report")


@dataclass
class MatrixDocument:
    dim: int
    kind: str
    payload: object
    metadata: dict = field(default_factory=dict)
    phases: object = None
    format_version: str = FORMAT_VERSION

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown document kind {self.kind!r}")


def _matrix_to_rows(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _rows_to_matrix(rows, dim) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.shape != (dim, dim, 2):
        raise InputError(f"payload shape {arr.shape} inconsistent with dim {dim}")
    return arr[..., 0] + 1j * arr[..., 1]


def document_for_matrix(H, metadata=None) -> MatrixDocument:
    M = H.matrix if isinstance(H, HadamardMatrix) else np.asarray(H, dtype=complex)
    return MatrixDocument(
        dim=M.shape[0],
        kind="matrix",
        payload=_matrix_to_rows(M),
        metadata=dict(metadata or {}),
        phases=phase_turns(H) if isinstance(H, HadamardMatrix) else None,
    )


def document_for_mubset(mubs, metadata=None) -> MatrixDocument:
    meta = {"method": mubs.method, "params": mubs.params}
    if mubs.weights is not None:
        meta["weights"] = list(mubs.weights)
    meta.update(metadata or {})
    return MatrixDocument(
        dim=mubs.dim,
        kind="mubset",
        payload=[_matrix_to_rows(B) for B in mubs.bases],
        metadata=meta,
    )


def document_for_solutions(sol, metadata=None) -> MatrixDocument:
    meta = {
        "label": sol.label,
        "count": sol.count,
        "distinct": sol.distinct,
        "multiplicities": sol.multiplicities.tolist(),
        "continuum_detected": sol.continuum_detected,
        "coverage_warning": sol.coverage_warning,
        "max_residual": float(sol.residuals.max()) if len(sol.residuals) else 0.0,
    }
    meta.update(metadata or {})
    return MatrixDocument(
        dim=sol.dim,
        kind="solutionset",
        payload=[[[float(z.real), float(z.imag)] for z in v] for v in sol.vectors],
        metadata=meta,
    )


def document_for_report(dim: int, report: dict, metadata=None) -> MatrixDocument:
    return MatrixDocument(dim=dim, kind="report", payload=report, metadata=dict(metadata or {}))


def serialize(doc: MatrixDocument) -> str:
    body = {
        "format_version": doc.format_version,
        "dim": doc.dim,
        "kind": doc.kind,
        "payload": doc.payload,
        "metadata": doc.metadata,
    }
    if doc.phases is not None:
        body["phases"] = doc.phases
    return json.dumps(body, indent=1, sort_keys=True)


def parse(text: str) -> MatrixDocument:
    try:
        body = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON document: {exc}") from exc
    version = body.get("format_version")
    if version != FORMAT_VERSION:
        raise InputError(f"unsupported format_version {version!r} (expected {FORMAT_VERSION})")
    for key in ("dim", "kind", "payload"):
        if key not in body:
            raise InputError(f"document missing field {key!r}")
    doc = MatrixDocument(
        dim=int(body["dim"]),
        kind=body["kind"],
        payload=body["payload"],
        metadata=body.get("metadata", {}),
        phases=body.get("phases"),
    )
    _validate_payload(doc)
    return doc


def _validate_payload(doc: MatrixDocument):
    d = doc.dim
    if doc.kind == "matrix":
        _rows_to_matrix(doc.payload, d)
    elif doc.kind == "mubset":
        for rows in doc.payload:
            _rows_to_matrix(rows, d)
    elif doc.kind == "solutionset":
        arr = np.asarray(doc.payload, dtype=float)
        if arr.ndim != 3 or arr.shape[1:] != (d, 2):
            raise InputError(f"solution payload shape {arr.shape} inconsistent with dim {d}")


def matrix_of(doc: MatrixDocument) -> np.ndarray:
    if doc.kind != "matrix":
        raise InputError(f"expected a matrix document, got kind {doc.kind!r}")
    return _rows_to_matrix(doc.payload, doc.dim)


def bases_of(doc: MatrixDocument) -> list:
    if doc.kind != "mubset":
        raise InputError(f"expected a mubset document, got kind {doc.kind!r}")
    return [_rows_to_matrix(rows, doc.dim) for rows in doc.payload]


def vectors_of(doc: MatrixDocument) -> np.ndarray:
    if doc.kind != "solutionset":
        raise InputError(f"expected a solutionset document, got kind {doc.kind!r}")
    arr = np.asarray(doc.payload, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def save(doc: MatrixDocument, path: str):
    with open(path, "w") as fh:
        fh.write(serialize(doc))
        fh.write("\n")


def load(path: str) -> MatrixDocument:
    with open(path) as fh:
        return parse(fh.read())
