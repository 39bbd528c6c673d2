# hamlim/services/serialization.py
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np
from pydantic import BaseModel, ValidationError

from hamlim.core.errors import HermitianError, MatrixFormatError
from hamlim.schemas.matrix import MatrixDocument
from hamlim.services.matcore import HermitianMatrix


def matrix_to_document(h: HermitianMatrix | np.ndarray) -> MatrixDocument:
    arr = h.data if isinstance(h, HermitianMatrix) else np.asarray(h, dtype=np.complex128)
    flat = arr.reshape(-1)
    return MatrixDocument(
        n=int(arr.shape[0]),
        entries=[(float(z.real), float(z.imag)) for z in flat],
    )


def matrix_from_document(doc: MatrixDocument) -> HermitianMatrix:
    arr = np.array([complex(re, im) for re, im in doc.entries], dtype=np.complex128)
    try:
        return HermitianMatrix(arr.reshape(doc.n, doc.n))
    except HermitianError as exc:
        raise MatrixFormatError(f"document does not hold a Hermitian matrix: {exc}") from exc


def dumps_matrix(h: HermitianMatrix | np.ndarray) -> str:
    return dumps_json(matrix_to_document(h))


def loads_matrix(text: str) -> HermitianMatrix:
    try:
        doc = MatrixDocument.model_validate_json(text)
    except ValidationError as exc:
        raise MatrixFormatError(f"invalid densecomplex-v1 document: {exc}") from exc
    return matrix_from_document(doc)


def dump_matrix(h: HermitianMatrix | np.ndarray, path: str | Path) -> None:
    Path(path).write_text(dumps_matrix(h) + "\n", encoding="utf-8")


def load_matrix(path: str | Path) -> HermitianMatrix:
    """
    Read a densecomplex-v1 file.

    Raises
    ------
    OSError
        If the file cannot be read.
    MatrixFormatError
        If the contents are not a valid Hermitian densecomplex-v1 document.
    """
    text = Path(path).read_text(encoding="utf-8")
    return loads_matrix(text)


def to_jsonable(payload: BaseModel | Mapping[str, Any], *, drop: Iterable[str] = ()) -> Any:
    """
    Plain JSON data for a report; top-level keys in `drop` are removed.
    """
    if isinstance(payload, BaseModel):
        data = payload.model_dump(mode="json", by_alias=True)
    else:
        data = dict(payload)
    for key in drop:
        data.pop(key, None)
    return data


def dumps_json(payload: BaseModel | Mapping[str, Any], *, drop: Iterable[str] = ()) -> str:
    """
    Canonical JSON: sorted keys, two-space indent, shortest float repr.
    """
    return json.dumps(to_jsonable(payload, drop=drop), sort_keys=True, indent=2, allow_nan=False)


def flatten_scalars(payload: Mapping[str, Any], prefix: str = "") -> dict[str, Any]:
    """
    Flatten nested mappings into dotted keys, keeping only scalar leaves.
    """
    flat: dict[str, Any] = {}
    for key, value in payload.items():
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            flat.update(flatten_scalars(value, prefix=f"{name}."))
        elif isinstance(value, (str, int, float, bool)) or value is None:
            flat[name] = value
    return flat


def dumps_csv(rows: Iterable[Mapping[str, Any]], columns: list[str] | None = None) -> str:
    rows = list(rows)
    if columns is None:
        columns = []
        for row in rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({col: row.get(col, "") for col in columns})
    return buffer.getvalue()
