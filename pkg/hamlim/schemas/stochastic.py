# hamlim/schemas/stochastic.py
from typing import Optional

from pydantic import BaseModel, Field


class TailReport(BaseModel):
    """
    Monte Carlo estimate of Pr(||H_s|| >= 4d sqrt(M ln M)) for uniform s in
    {-1, +1}^M, next to the closed-form tail bounds.
    """

    M: int = Field(..., ge=2, examples=[51])
    N: int = Field(..., description="Circulant dimension 2M + 1.", examples=[103])
    d: float = Field(..., gt=0, examples=[1.0])
    trials: int = Field(..., ge=1, examples=[2000])
    seed: int = Field(..., ge=0)
    threshold: float = Field(..., description="4 d sqrt(M ln M).")
    exceed_count: int = Field(..., ge=0)
    empirical_prob: float = Field(..., ge=0, le=1)
    std_err: float = Field(..., ge=0, description="sqrt(p (1 - p) / trials).")
    bound_lemma: float = Field(..., ge=0, description="4 / M^(2d^2 - 1).")
    bound_union: float = Field(..., ge=0, description="2N / M^(2d^2), the explicit union bound.")
    bound_vacuous: bool = Field(..., description="True when bound_lemma >= 1.")

    eigen_index: int = Field(..., ge=0, description="Fixed r for the single-eigenvalue check.")
    eigen_exceed_count: int = Field(..., ge=0)
    eigen_empirical_prob: float = Field(..., ge=0, le=1)
    eigen_std_err: float = Field(..., ge=0)
    eigen_bound: float = Field(..., ge=0, description="2 / M^(2d^2) for a single |lambda_r|.")

    within_lemma: bool = Field(..., description="empirical_prob <= bound_lemma + 3 std_err.")
    within_union: bool = Field(..., description="empirical_prob <= bound_union + 3 std_err.")
    within_eigen: bool = Field(
        ..., description="eigen_empirical_prob <= eigen_bound + 3 eigen_std_err."
    )


class PromiseProbabilityReport(BaseModel):
    """
    Probability that a uniform sign string has |sum(s)| = B:
    exactly 2 C(M, (M+B)/2) / 2^M, and the normal approximation
    2 exp(-B^2 / 2M) / sqrt(pi M / 2).
    """

    M: int = Field(..., ge=1)
    B: int = Field(..., ge=1)
    majority: int = Field(..., description="k = (M + B) / 2, the count of majority entries.")
    exact: str = Field(..., description="Reduced fraction p/q from big-integer binomials.")
    exact_float: float = Field(..., ge=0, le=1, description="0.0 once the value underflows.")
    log_exact: float = Field(..., description="Natural log of the exact probability.")
    asymptotic: float = Field(..., ge=0)
    log_asymptotic: float
    relative_error: Optional[float] = Field(
        None,
        ge=0,
        description="|asymptotic / exact - 1| from the logs; None past the float range.",
    )
    m_times_exact: float = Field(..., ge=0, description="M * exact; Theta(1) when B ~ sqrt(M ln M).")
    approximation_regime: float = Field(
        ...,
        ge=0,
        description="|k - M/2| / M^(2/3); the approximation needs this to be small.",
    )


class AdversaryReport(BaseModel):
    """
    Adversary-method quantities for distinguishing sum(s) = -B from +B.

    m = C(M/2 + B/2, B) and l = C(M/2 + B/2 - 1, B - 1) are exact; big
    integers are carried as decimal strings.
    """

    M: int = Field(..., ge=2)
    B: int = Field(..., ge=2)
    m: str = Field(..., description="Decimal digits of m = m'.")
    l: str = Field(..., description="Decimal digits of l = l'.")
    m_digits: int = Field(..., ge=1)
    ratio: str = Field(..., description="m / l as a reduced fraction.", examples=["3/2"])
    ratio_float: float
    ratio_identity_ok: bool = Field(..., description="m / l == (M/B + 1) / 2 as rationals.")
    product_identity_ok: bool = Field(..., description="ratio * l == m as big integers.")
    lower_bound: float = Field(..., description="sqrt(m m' / (l l')) = m / l.")
    counting_queries: float = Field(
        ..., description="Query estimate 2M/B of approximate counting to accuracy B/2M."
    )


class AverageCaseReport(BaseModel):
    """
    Cost of a hypothetical polylog(M) average-case simulator on the promise
    instances, split into the typical-norm term and the large-norm term, and
    compared with the sqrt(M / ln M) query lower bound.
    """

    M: int = Field(..., ge=2)
    c: float = Field(..., gt=0)
    d: float = Field(..., gt=0)
    B: int = Field(..., ge=1)
    tau: float = Field(..., gt=0, description="pi / (4B).")
    term1: float = Field(..., ge=0, description="(pi d ln M)^c.")
    p_large: float = Field(
        ...,
        ge=0,
        le=1,
        description="min(1, Pr(||H_s|| large) / Pr(promise)) with the union bound 2N/M^(2d^2).",
    )
    term2: float = Field(..., ge=0, description="p_large * (2M tau ln M)^c.")
    total: float = Field(..., ge=0)
    lower_bound: float = Field(..., gt=0, description="sqrt(M / ln M).")
    term1_dominates: bool
    exponent_condition: bool = Field(..., description="2d^2 > c/2 + 2.")
    below_lower_bound: bool = Field(..., description="total < lower_bound.")
    normalized_total: float = Field(..., ge=0, description="total / (ln M)^c.")
    crossover_M: Optional[int] = Field(
        None,
        description="Smallest M = 1000 * 2^j <= 1e9 with total < sqrt(M / ln M), if any.",
    )
