# hamlim/services/stochastic.py
from __future__ import annotations

import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np
from scipy import special

from hamlim.core.config import get_settings
from hamlim.core.errors import DomainError, PromiseViolationError
from hamlim.schemas.stochastic import (
    AdversaryReport,
    AverageCaseReport,
    PromiseProbabilityReport,
    TailReport,
)
from hamlim.services.instances import SignString, cosine_table, random_sign_string

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]

# crossover scan: M = CROSSOVER_START * 2^j up to CROSSOVER_LIMIT
CROSSOVER_START = 1_000
CROSSOVER_LIMIT = 1_000_000_000

LOG_FLOAT_MAX = math.log(sys.float_info.max)


@dataclass(frozen=True)
class PromiseConfig:
    """
    Promise instance shape: strings of length M with sum(s) in {-B, +B},
    detected by evolving for tau = pi / (4B).
    """

    M: int
    B: int

    def __post_init__(self) -> None:
        if self.M < 1:
            raise PromiseViolationError("M must be positive")
        if not 1 <= self.B <= self.M:
            raise PromiseViolationError(f"B={self.B} must lie in 1..M={self.M}")
        if (self.B - self.M) % 2:
            raise PromiseViolationError(f"B={self.B} and M={self.M} must have equal parity")

    @property
    def tau(self) -> float:
        return math.pi / (4 * self.B)

    @property
    def majority(self) -> int:
        """Number of entries that carry the sign of the sum."""
        return (self.M + self.B) // 2


def derive_seed(master: int, index: int) -> np.random.SeedSequence:
    """
    Seed for trial `index` under `master`; independent of evaluation order.
    """
    if master < 0 or index < 0:
        raise DomainError("seeds and trial indices must be non-negative")
    return np.random.SeedSequence(entropy=master, spawn_key=(index,))


def trial_rng(master: int, index: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master, index))


def derive_promise_bound(M: int) -> PromiseConfig:
    """
    B = round(sqrt(M ln M)), raised by one when its parity differs from M.
    """
    if M < 2:
        raise DomainError("M must be at least 2")
    b = max(1, int(round(math.sqrt(M * math.log(M)))))
    if (b - M) % 2:
        b += 1
    return PromiseConfig(M=M, B=b)


def sample_promise_string(cfg: PromiseConfig, seed: SeedLike) -> SignString:
    """
    Uniform draw from {s : sum(s) = -B or +B}.

    The sign of the sum is a fair coin and the positions of the majority
    entries are a uniform subset of size (M + B) / 2.
    """
    rng = np.random.default_rng(seed)
    sign = 1 if rng.random() < 0.5 else -1
    signs = np.full(cfg.M, -sign, dtype=int)
    signs[rng.choice(cfg.M, size=cfg.majority, replace=False)] = sign
    return SignString(tuple(int(x) for x in signs))


def randomize_promise_instance(s: SignString, seed: SeedLike) -> SignString:
    """
    Random position permutation followed by a global negation with
    probability 1/2. Maps any promise string to a uniform one of the same |sum|.
    """
    rng = np.random.default_rng(seed)
    signs = np.array(s.signs, dtype=int)[rng.permutation(len(s))]
    if rng.random() < 0.5:
        signs = -signs
    return SignString(tuple(int(x) for x in signs))


def _std_err(p: float, trials: int) -> float:
    return math.sqrt(p * (1.0 - p) / trials)


def _exp_checked(log_value: float, what: str) -> float:
    """exp(log_value); underflow gives 0.0, overflow is a DomainError."""
    if log_value > LOG_FLOAT_MAX:
        raise DomainError(f"{what} exceeds the float range (natural log {log_value:.1f})")
    return math.exp(log_value)


def tail_estimate(
    M: int,
    d: float,
    trials: int,
    seed: int,
    *,
    eigen_index: int = 1,
    workers: int | None = None,
) -> TailReport:
    """
    Empirical tail of ||H_s|| for uniform s in {-1, +1}^M against the bounds.

    Each trial draws its string from trial_rng(seed, i) and reads the norm
    off the closed-form circulant spectrum, so the result does not depend on
    `workers`.

    Rules
    -----
    - threshold = 4 d sqrt(M ln M)
    - bound_lemma = 4 / M^(2d^2 - 1), bound_union = 2N / M^(2d^2), N = 2M + 1
    - single eigenvalue |lambda_r| (r = eigen_index): bound 2 / M^(2d^2)
    """
    if M < 2:
        raise DomainError("M must be at least 2")
    if trials < 1:
        raise DomainError("trials must be at least 1")
    if not d > 0:
        raise DomainError("d must be positive")
    if not 0 <= eigen_index <= M:
        raise DomainError(f"eigen_index must lie in 0..{M}")
    if workers is None:
        workers = get_settings().TAIL_WORKERS

    n = 2 * M + 1
    threshold = 4.0 * d * math.sqrt(M * math.log(M))
    table = cosine_table(M)

    def trial(index: int) -> tuple[float, float]:
        s = random_sign_string(M, trial_rng(seed, index))
        signs = np.array(s.signs, dtype=float)
        half = table @ signs
        half[0] = 2.0 * float(np.sum(signs))
        # max over r = 0..M covers all N eigenvalues since lambda_r = lambda_{N-r}
        return float(np.max(np.abs(half))), float(abs(half[eigen_index]))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(trial, range(trials)))
    else:
        results = [trial(i) for i in range(trials)]

    norms = np.array([r[0] for r in results])
    single = np.array([r[1] for r in results])
    exceed = int(np.sum(norms >= threshold))
    eigen_exceed = int(np.sum(single >= threshold))
    logger.debug("tail M=%d d=%g: %d/%d trials above %.3f", M, d, exceed, trials, threshold)

    exponent = 2.0 * d * d
    p = exceed / trials
    p_eigen = eigen_exceed / trials
    std_err = _std_err(p, trials)
    eigen_std_err = _std_err(p_eigen, trials)
    log_m = math.log(M)
    bound_lemma = _exp_checked(math.log(4.0) - (exponent - 1.0) * log_m, "bound_lemma")
    bound_union = _exp_checked(math.log(2.0 * n) - exponent * log_m, "bound_union")
    eigen_bound = _exp_checked(math.log(2.0) - exponent * log_m, "eigen_bound")

    return TailReport(
        M=M,
        N=n,
        d=d,
        trials=trials,
        seed=seed,
        threshold=threshold,
        exceed_count=exceed,
        empirical_prob=p,
        std_err=std_err,
        bound_lemma=bound_lemma,
        bound_union=bound_union,
        bound_vacuous=bound_lemma >= 1.0,
        eigen_index=eigen_index,
        eigen_exceed_count=eigen_exceed,
        eigen_empirical_prob=p_eigen,
        eigen_std_err=eigen_std_err,
        eigen_bound=eigen_bound,
        within_lemma=p <= bound_lemma + 3.0 * std_err,
        within_union=p <= bound_union + 3.0 * std_err,
        within_eigen=p_eigen <= eigen_bound + 3.0 * eigen_std_err,
    )


def hoeffding_bound(M: int, t: float, ranges: Sequence[tuple[float, float]]) -> float:
    """
    exp(-2 M^2 t^2 / sum_j (b_j - a_j)^2) for the mean of M independent
    variables X_j in [a_j, b_j] deviating from its expectation by t.
    """
    if M < 1:
        raise DomainError("M must be positive")
    if len(ranges) != M:
        raise DomainError(f"expected {M} ranges, got {len(ranges)}")
    if not t > 0:
        raise DomainError("t must be positive")
    if any(b < a for a, b in ranges):
        raise DomainError("every range needs b_j >= a_j")

    spread = math.fsum((b - a) ** 2 for a, b in ranges)
    if spread == 0:
        raise DomainError("all ranges are degenerate")
    return math.exp(-2.0 * M * M * t * t / spread)


def _check_promise_parity(M: int, B: int) -> None:
    if M < 1 or not 1 <= B <= M:
        raise DomainError(f"need 1 <= B <= M, got M={M}, B={B}")
    if (M - B) % 2:
        raise PromiseViolationError(f"B={B} and M={M} must have equal parity")


def log_promise_probability(M: int, B: int) -> float:
    """ln(2 C(M, (M+B)/2) / 2^M) via log-gamma, for M too large for exact binomials."""
    _check_promise_parity(M, B)
    k = (M + B) // 2
    log_comb = special.gammaln(M + 1) - special.gammaln(k + 1) - special.gammaln(M - k + 1)
    return float(math.log(2.0) + log_comb - M * math.log(2.0))


def promise_probability(M: int, B: int) -> PromiseProbabilityReport:
    """
    Exact promise probability from big-integer binomials, with its normal
    approximation and the regime indicator |k - M/2| / M^(2/3).

    Far in the tail both probabilities underflow to 0.0, so the relative
    error is taken from their logarithms. It is None when the approximation
    overshoots by more than the float range.
    """
    _check_promise_parity(M, B)
    k = (M + B) // 2
    count = 2 * math.comb(M, k)
    exact = Fraction(count, 2**M)
    # math.log is exact enough on big integers
    log_exact = math.log(count) - M * math.log(2.0)
    log_asymptotic = math.log(2.0) - (B * B) / (2.0 * M) - 0.5 * math.log(math.pi * M / 2.0)
    gap = log_asymptotic - log_exact
    relative_error = abs(math.expm1(gap)) if gap <= LOG_FLOAT_MAX else None
    exact_float = float(exact)

    return PromiseProbabilityReport(
        M=M,
        B=B,
        majority=k,
        exact=str(exact),
        exact_float=exact_float,
        log_exact=log_exact,
        asymptotic=math.exp(log_asymptotic),
        log_asymptotic=log_asymptotic,
        relative_error=relative_error,
        m_times_exact=M * exact_float,
        approximation_regime=abs(k - M / 2.0) / M ** (2.0 / 3.0),
    )


def adversary_bound(M: int, B: int) -> AdversaryReport:
    """
    Adversary quantities m = C(M/2 + B/2, B), l = C(M/2 + B/2 - 1, B - 1).

    Rules
    -----
    M and B must both be even with 2 <= B <= M. The ratio m / l reduces to
    (M/B + 1) / 2, checked here as an exact rational identity.
    """
    if M % 2 or B % 2:
        raise DomainError("adversary counts need M and B even")
    if not 2 <= B <= M:
        raise DomainError(f"need 2 <= B <= M, got M={M}, B={B}")

    top = M // 2 + B // 2
    m = math.comb(top, B)
    l = math.comb(top - 1, B - 1)
    ratio = Fraction(m, l)
    expected = (Fraction(M, B) + 1) / 2

    return AdversaryReport(
        M=M,
        B=B,
        m=str(m),
        l=str(l),
        m_digits=len(str(m)),
        ratio=str(ratio),
        ratio_float=float(ratio),
        ratio_identity_ok=ratio == expected,
        product_identity_ok=ratio * l == m,
        lower_bound=float(ratio),
        counting_queries=2.0 * M / B,
    )


def _average_case_log_terms(
    M: int, c: float, d: float
) -> tuple[PromiseConfig, float, float, float]:
    """(cfg, ln term1, ln p_large, ln term2); logs keep large c finite."""
    cfg = derive_promise_bound(M)
    log_m = math.log(M)
    log_term1 = c * math.log(math.pi * d * log_m)

    # union bound 2(2M+1)/M^(2d^2) over the promise probability
    log_ratio = (
        math.log(2.0 * (2 * M + 1)) - 2.0 * d * d * log_m - log_promise_probability(M, cfg.B)
    )
    log_p_large = min(0.0, log_ratio)
    log_term2 = log_p_large + c * math.log(2.0 * M * cfg.tau * log_m)
    return cfg, log_term1, log_p_large, log_term2


def _crossover(c: float, d: float) -> int | None:
    m = CROSSOVER_START
    while m <= CROSSOVER_LIMIT:
        _, log_term1, _, log_term2 = _average_case_log_terms(m, c, d)
        if np.logaddexp(log_term1, log_term2) < 0.5 * math.log(m / math.log(m)):
            return m
        m *= 2
    return None


def average_case_bound(M: int, c: float, d: float) -> AverageCaseReport:
    """
    Split the expected cost of a (ln M)^c-query average-case simulator into
    the typical-norm term (pi d ln M)^c and the large-norm term
    p_large (2M tau ln M)^c, and compare the sum with sqrt(M / ln M).

    Raises
    ------
    DomainError
        If c or d is not positive, or a reported cost exceeds the float range.
    """
    if M < 2:
        raise DomainError("M must be at least 2")
    if not c > 0 or not d > 0:
        raise DomainError("c and d must be positive")

    cfg, log_term1, log_p_large, log_term2 = _average_case_log_terms(M, c, d)
    log_total = float(np.logaddexp(log_term1, log_term2))
    log_lower = 0.5 * math.log(M / math.log(M))
    return AverageCaseReport(
        M=M,
        c=c,
        d=d,
        B=cfg.B,
        tau=cfg.tau,
        term1=_exp_checked(log_term1, "term1"),
        p_large=math.exp(log_p_large),
        term2=_exp_checked(log_term2, "term2"),
        total=_exp_checked(log_total, "total"),
        lower_bound=math.exp(log_lower),
        term1_dominates=log_term2 < log_term1,
        exponent_condition=2.0 * d * d > c / 2.0 + 2.0,
        below_lower_bound=log_total < log_lower,
        normalized_total=_exp_checked(log_total - c * math.log(math.log(M)), "normalized_total"),
        crossover_M=_crossover(c, d),
    )
