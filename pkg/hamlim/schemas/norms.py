# hamlim/schemas/norms.py
from pydantic import BaseModel, Field


class NormProfile(BaseModel):
    """
    The five matrix norms that govern simulation cost, plus dimension and
    row sparsity.

    For Hermitian input these satisfy
    max_norm <= mcn <= spectral <= abs_spectral <= one_norm.
    """

    n: int = Field(..., ge=1, description="Matrix dimension N.", examples=[4])
    k: int = Field(
        ...,
        ge=0,
        description="Largest number of nonzero entries in any row.",
        examples=[2],
    )
    max_norm: float = Field(..., ge=0, description="Largest entry magnitude, max|H_ij|.")
    mcn: float = Field(..., ge=0, description="Maximum Euclidean column norm, max_j ||H e_j||.")
    spectral: float = Field(..., ge=0, description="Spectral norm ||H|| (largest |eigenvalue|).")
    abs_spectral: float = Field(
        ...,
        ge=0,
        description="Spectral norm of abs(H), i.e. its Perron root.",
    )
    one_norm: float = Field(..., ge=0, description="Induced 1-norm: maximum absolute column sum.")


class InequalityCheck(BaseModel):
    """
    One link `lhs <= rhs` of an inequality chain.

    slack = (rhs - lhs) / max(|rhs|, floor); the link holds when slack is
    not more negative than the configured relative tolerance.
    """

    name: str = Field(..., description="Link label, e.g. 'spectral<=abs_spectral'.")
    lhs: float
    rhs: float
    slack: float = Field(..., description="Relative slack (rhs - lhs) / max(|rhs|, floor).")
    ok: bool


class ChainReport(BaseModel):
    """
    Evaluation of the general norm chain (N-dependent tail) and the sparse
    chain (k-dependent tail) for a single matrix, plus the two identities
    mcn(abs(H)) = mcn(H) and ||abs(H)||_1 = ||H||_1 and the bound
    ||abs(H)|| <= sqrt(N) ||H||.
    """

    profile: NormProfile
    general_chain: list[InequalityCheck] = Field(
        ..., description="Links of max <= mcn <= ... <= sqrt(N) mcn <= N max."
    )
    sparse_chain: list[InequalityCheck] = Field(
        ..., description="Links of max <= mcn <= ... <= sqrt(k) mcn <= k max."
    )
    sparse_applicable: bool = Field(
        ..., description="True when k < N, i.e. the sparse chain is strictly stronger."
    )
    identities: list[InequalityCheck] = Field(
        ..., description="Equalities checked as two-sided relative differences."
    )
    abs_spectral_bound: InequalityCheck = Field(
        ...,
        description="||abs(H)|| <= sqrt(N) ||H||; tight for tensor powers of the Hadamard matrix.",
    )
    general_chain_ok: bool
    sparse_chain_ok: bool
    identities_ok: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.general_chain_ok
            and self.sparse_chain_ok
            and self.identities_ok
            and self.abs_spectral_bound.ok
        )


class WalkCostEstimate(BaseModel):
    """
    Step estimates of a walk-based simulation for time t and error delta:
    ||abs(H)|| |t| / sqrt(delta) and ||H||_1 |t| / sqrt(delta).
    """

    t: float
    delta: float = Field(..., gt=0, le=1)
    steps_abs: float = Field(..., ge=0, description="||abs(H)|| * |t| / sqrt(delta).")
    steps_one: float = Field(..., ge=0, description="||H||_1 * |t| / sqrt(delta).")
    spectral_steps: float = Field(
        ...,
        ge=0,
        description="||H|| * |t| / sqrt(delta), the unattainable spectral-norm scaling.",
    )
