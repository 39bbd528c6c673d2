# hamlim/schemas/graph.py
from pydantic import BaseModel, Field

from hamlim.schemas.norms import InequalityCheck


class StarDocument(BaseModel):
    center: int = Field(..., ge=0, examples=[0])
    leaves: list[int] = Field(..., min_length=1, examples=[[1, 2]])
    weights: list[tuple[float, float]] = Field(
        ...,
        description="(re, im) of w_leaf = H[leaf, center], one per leaf.",
        examples=[[[1.0, 0.0], [0.0, 1.0]]],
    )


class DecompositionDocument(BaseModel):
    """
    JSON form of a star-forest decomposition:
    {"forests": [[{"center": c, "leaves": [...], "weights": [[re, im], ...]}], ...]}
    """

    forests: list[list[StarDocument]]


class ArboricityReport(BaseModel):
    """
    Star-forest bounds for one decomposition of H into 2k' star forests.

    Checks (k' = source_forest_count):
      abs_spectral <= 2k' mcn, abs_spectral <= 2k' spectral, spectral <= 2k' mcn,
      (1/2k') sum ||S_l|| <= mcn, abs_spectral <= sum ||S_l||
    and, when k' = 1, the tree bound spectral <= 2 mcn.
    """

    n: int = Field(..., ge=1)
    k_prime: int = Field(..., ge=0, description="Number of forests the edges were split into.")
    term_count: int = Field(..., ge=0, description="Number of nonempty star forests S_l.")
    spectral: float = Field(..., ge=0)
    abs_spectral: float = Field(..., ge=0)
    mcn: float = Field(..., ge=0)
    term_norms: list[float] = Field(..., description="||S_l|| for each term.")
    term_identity_deviation: float = Field(
        ...,
        ge=0,
        description="Largest relative gap among mcn(S_l), ||S_l||, ||abs(S_l)|| over all terms.",
    )
    checks: list[InequalityCheck]
    passed: bool


class DecompositionResult(BaseModel):
    decomposition: DecompositionDocument
    report: ArboricityReport
