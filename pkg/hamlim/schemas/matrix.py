# hamlim/schemas/matrix.py
from typing import Literal

from pydantic import BaseModel, Field, model_validator

MATRIX_FORMAT = "densecomplex-v1"


class MatrixDocument(BaseModel):
    """
    On-disk representation of a dense complex matrix (`densecomplex-v1`).

    Entries are N^2 row-major [re, im] pairs. Floats are written with
    Python's shortest round-tripping representation, so dump/load is exact.
    """

    format: Literal["densecomplex-v1"] = Field(
        MATRIX_FORMAT,
        description="Format tag; must be 'densecomplex-v1'.",
    )
    n: int = Field(..., ge=1, description="Matrix dimension N.", examples=[2])
    entries: list[tuple[float, float]] = Field(
        ...,
        description="N*N row-major [re, im] pairs.",
        examples=[[[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]]],
    )

    @model_validator(mode="after")
    def _check_entry_count(self) -> "MatrixDocument":
        if len(self.entries) != self.n * self.n:
            raise ValueError(
                f"expected {self.n * self.n} entries for n={self.n}, got {len(self.entries)}"
            )
        return self
