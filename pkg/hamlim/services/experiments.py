# hamlim/services/experiments.py
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any, Sequence

import numpy as np

from hamlim.core.errors import DimensionMismatchError, DomainError, PromiseViolationError
from hamlim.schemas.experiments import ExperimentReport
from hamlim.services.graphdecomp import star_decompose, trotter_evolve
from hamlim.services.instances import (
    BitString,
    SignString,
    circulant_from_string,
    dense_index,
    dense_parity_hamiltonian,
    hadamard_tensor,
    line_hamiltonian,
    parity_hamiltonian,
    parity_index,
    random_bitstring,
)
from hamlim.services.matcore import (
    HermitianMatrix,
    abs_entrywise,
    basis_state,
    evolve,
    expm_unitary,
    hermitian,
    spectral_norm,
    uniform_state,
)
from hamlim.services.norms import max_norm, mcn, one_norm
from hamlim.services.stochastic import (
    PromiseConfig,
    derive_promise_bound,
    randomize_promise_instance,
    sample_promise_string,
    trial_rng,
)

logger = logging.getLogger(__name__)

FIDELITY_TOL = 1e-6
SUBSPACE_TOL = 1e-8
PHASE_TOL = 1e-8
UNIT_MAGNITUDE_TOL = 1e-9
TRANSFER_TOL = 1e-8
FASTFORWARD_TOL = 1e-9
SPECTRAL_TOL = 1e-9

# entry-scale ranges for the dense parity instance, meaningful from N = 8 on
DENSE_MAX_RANGE = (0.4, 0.7)
DENSE_MCN_RANGE = (0.5, 1.0)
DENSE_RANGE_MIN_N = 8

# magnitude of the fitted log-log slope of product-formula error vs steps
TROTTER_SLOPE_RANGE = (0.9, 1.1)
# error(k_last) <= TROTTER_RATIO_SLACK * error(k_first) * k_first / k_last
TROTTER_RATIO_SLACK = 8.0
# below this every error is rounding noise: the terms commute
TROTTER_EXACT_TOL = 1e-10


class CountedPhaseOracle:
    """
    Phase oracle (i, j) -> H_ij / |H_ij|, or 1 where H_ij = 0, that counts
    its queries.

    Backed either by a dense matrix or by the sign string of a symmetric
    circulant. With a string backing, each off-diagonal query reads exactly
    one entry of the string and diagonal queries read none.
    """

    def __init__(self, *, matrix: HermitianMatrix | None = None, signs: SignString | None = None) -> None:
        if (matrix is None) == (signs is None):
            raise DomainError("oracle needs exactly one of matrix or signs")
        self._matrix = hermitian(matrix).data if matrix is not None else None
        self._signs = signs
        self.query_count = 0
        self.string_query_count = 0

    @classmethod
    def from_matrix(cls, h: HermitianMatrix) -> "CountedPhaseOracle":
        return cls(matrix=h)

    @classmethod
    def from_sign_string(cls, s: SignString) -> "CountedPhaseOracle":
        return cls(signs=s)

    @property
    def n(self) -> int:
        if self._matrix is not None:
            return int(self._matrix.shape[0])
        return 2 * len(self._signs) + 1

    def _string_entry(self, i: int, j: int) -> int:
        m = len(self._signs)
        k = (j - i) % self.n
        if k == 0:
            return 0
        if k > m:
            k = self.n - k
        self.string_query_count += 1
        return self._signs.signs[k - 1]

    def query(self, i: int, j: int) -> complex:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise DimensionMismatchError(f"query ({i}, {j}) outside dimension {self.n}")
        self.query_count += 1
        if self._matrix is not None:
            entry = complex(self._matrix[i, j])
        else:
            entry = complex(self._string_entry(i, j))
        if entry == 0:
            return 1.0 + 0.0j
        return entry / abs(entry)

    def reset(self) -> None:
        self.query_count = 0
        self.string_query_count = 0


def rebuild_from_oracle(oracle: CountedPhaseOracle, magnitudes: np.ndarray) -> HermitianMatrix:
    """
    H_ij = |H_ij| * phase(i, j) from known magnitudes and N^2 oracle queries.
    """
    n = oracle.n
    if magnitudes.shape != (n, n):
        raise DimensionMismatchError(f"magnitudes of shape {magnitudes.shape} for oracle of size {n}")
    phases = np.array(
        [[oracle.query(i, j) for j in range(n)] for i in range(n)],
        dtype=np.complex128,
    )
    return HermitianMatrix(magnitudes * phases)


def _circulant_magnitudes(m: int) -> np.ndarray:
    n = 2 * m + 1
    return np.ones((n, n)) - np.eye(n)


def _finish(
    name: str,
    started: float,
    *,
    passed: bool,
    inputs: dict[str, Any],
    metrics: dict[str, Any],
    tolerances: dict[str, float],
    seed: int | None = None,
) -> ExperimentReport:
    return ExperimentReport(
        name=name,
        seed=seed,
        inputs=inputs,
        metrics=metrics,
        tolerances=tolerances,
        passed=passed,
        generated_at=datetime.now(timezone.utc),
        wall_time_seconds=time.perf_counter() - started,
    )


@dataclass(frozen=True)
class ParityOutcome:
    parity: int
    fidelity: float
    report: ExperimentReport


@dataclass(frozen=True)
class SignOutcome:
    sign: int
    phase_error: float
    report: ExperimentReport


def parity_experiment(s: BitString, *, cap: int | None = None) -> ParityOutcome:
    """
    Read the parity of S off the dense Hamiltonian.

    Rules
    -----
    - Start from (1/sqrt(N)) sum_k |0, 0, k> and evolve for t = pi N / 2.
    - Sum the probability over the copies |N, j, k> for j = 0 and j = 1;
      the larger one names the parity and is the fidelity.
    - The dense dynamics must stay in span{|i, j> (x) uniform}: the evolved
      state is compared with (H2 evolution of |0, 0>) (x) uniform.
    """
    started = time.perf_counter()
    n = len(s)
    h = dense_parity_hamiltonian(s, cap=cap)
    t = math.pi * n / 2.0

    copies = uniform_state(n)
    start = np.zeros(h.n, dtype=np.complex128)
    start[[dense_index(0, 0, k, n) for k in range(n)]] = copies
    out = evolve(h, t, start)

    probs = [
        float(sum(abs(out[dense_index(n, j, k, n)]) ** 2 for k in range(n)))
        for j in (0, 1)
    ]
    parity = int(np.argmax(probs))
    fidelity = probs[parity]

    reduced = evolve(parity_hamiltonian(s), t, basis_state(2 * (n + 1), parity_index(0, 0)))
    subspace_deviation = float(np.max(np.abs(out - np.kron(reduced, copies))))
    blocks = out.reshape(2 * (n + 1), n)
    copy_spread = float(np.max(np.abs(blocks - blocks[:, :1])))

    passed = (
        parity == s.parity
        and fidelity >= 1.0 - FIDELITY_TOL
        and subspace_deviation <= SUBSPACE_TOL
        and copy_spread <= SUBSPACE_TOL
    )
    logger.debug("parity N=%d: parity=%d fidelity=%.12f", n, parity, fidelity)
    report = _finish(
        "parity",
        started,
        passed=passed,
        inputs={"S": str(s), "N": n, "t": t},
        metrics={
            "parity": parity,
            "expected_parity": s.parity,
            "fidelity": fidelity,
            "prob_j0": probs[0],
            "prob_j1": probs[1],
            "subspace_deviation": subspace_deviation,
            "copy_spread": copy_spread,
            "dimension": h.n,
        },
        tolerances={"fidelity": FIDELITY_TOL, "subspace": SUBSPACE_TOL},
    )
    return ParityOutcome(parity=parity, fidelity=fidelity, report=report)


def parity_sweep(n: int, count: int, seed: int) -> ExperimentReport:
    """parity_experiment on `count` random N-bit strings drawn from trial_rng(seed, i)."""
    if count < 1:
        raise DomainError("count must be at least 1")
    started = time.perf_counter()
    correct = 0
    min_fidelity = 1.0
    max_deviation = 0.0
    for index in range(count):
        s = random_bitstring(n, trial_rng(seed, index))
        outcome = parity_experiment(s)
        correct += int(outcome.parity == s.parity)
        min_fidelity = min(min_fidelity, outcome.fidelity)
        max_deviation = max(max_deviation, outcome.report.metrics["subspace_deviation"])

    return _finish(
        "parity-sweep",
        started,
        seed=seed,
        passed=correct == count and min_fidelity >= 1.0 - FIDELITY_TOL and max_deviation <= SUBSPACE_TOL,
        inputs={"N": n, "count": count},
        metrics={
            "correct": correct,
            "agreement": correct / count,
            "min_fidelity": min_fidelity,
            "max_subspace_deviation": max_deviation,
        },
        tolerances={"fidelity": FIDELITY_TOL, "subspace": SUBSPACE_TOL},
    )


def sign_detection_experiment(
    s: SignString,
    cfg: PromiseConfig,
    *,
    randomize_seed: int | np.random.Generator | None = None,
) -> SignOutcome:
    """
    Detect the sign of sum(s) from one eigenphase of e^{-i H_s tau}.

    The uniform state is the lambda_0 = 2 sum(s) eigenvector, so with
    tau = pi / (4B) its overlap after evolution is exactly -i or +i. H_s is
    rebuilt entry by entry through a string-backed CountedPhaseOracle and
    the all-ones off-diagonal magnitudes.

    Raises
    ------
    PromiseViolationError
        If len(s) != M or |sum(s)| != B.
    """
    started = time.perf_counter()
    if len(s) != cfg.M:
        raise PromiseViolationError(f"string has length {len(s)}, expected M={cfg.M}")
    if abs(s.total) != cfg.B:
        raise PromiseViolationError(f"|sum(s)| = {abs(s.total)} but the promise is B={cfg.B}")

    instance = s if randomize_seed is None else randomize_promise_instance(s, randomize_seed)

    oracle = CountedPhaseOracle.from_sign_string(instance)
    h = rebuild_from_oracle(oracle, _circulant_magnitudes(cfg.M))
    oracle_matches = h == circulant_from_string(instance)

    u = uniform_state(h.n)
    inner = complex(np.vdot(u, evolve(h, cfg.tau, u)))
    sign = 1 if -inner.imag > 0 else -1
    expected_sign = 1 if instance.total > 0 else -1
    phase_error = abs(inner - (-1j * expected_sign))
    magnitude_error = abs(abs(inner) - 1.0)

    passed = (
        sign == expected_sign
        and phase_error <= PHASE_TOL
        and magnitude_error <= UNIT_MAGNITUDE_TOL
        and oracle_matches
        and oracle.string_query_count <= oracle.query_count
    )
    report = _finish(
        "sign-detection",
        started,
        passed=passed,
        inputs={
            "s": str(s),
            "M": cfg.M,
            "B": cfg.B,
            "tau": cfg.tau,
            "randomized": randomize_seed is not None,
        },
        metrics={
            "sign": sign,
            "expected_sign": expected_sign,
            "instance": str(instance),
            "sign_flipped": instance.total != s.total,
            "inner_re": inner.real,
            "inner_im": inner.imag,
            "phase_error": phase_error,
            "magnitude_error": magnitude_error,
            "matrix_queries": oracle.query_count,
            "string_queries": oracle.string_query_count,
            "string_queries_per_matrix_query": oracle.string_query_count / oracle.query_count,
            "oracle_matches": oracle_matches,
        },
        tolerances={"phase": PHASE_TOL, "magnitude": UNIT_MAGNITUDE_TOL},
    )
    return SignOutcome(sign=sign, phase_error=phase_error, report=report)


def sign_sweep(M: int, count: int, seed: int, *, randomize: bool = False) -> ExperimentReport:
    """
    sign_detection_experiment on `count` promise strings, B from derive_promise_bound(M).
    """
    if count < 1:
        raise DomainError("count must be at least 1")
    started = time.perf_counter()
    cfg = derive_promise_bound(M)
    correct = 0
    max_phase_error = 0.0
    max_per_query = 0.0
    all_passed = True
    for index in range(count):
        rng = trial_rng(seed, index)
        s = sample_promise_string(cfg, rng)
        outcome = sign_detection_experiment(s, cfg, randomize_seed=rng if randomize else None)
        metrics = outcome.report.metrics
        correct += int(outcome.sign == metrics["expected_sign"])
        max_phase_error = max(max_phase_error, outcome.phase_error)
        max_per_query = max(max_per_query, metrics["string_queries_per_matrix_query"])
        all_passed = all_passed and outcome.report.passed

    return _finish(
        "sign-sweep",
        started,
        seed=seed,
        passed=all_passed and correct == count,
        inputs={"M": M, "B": cfg.B, "count": count, "randomized": randomize},
        metrics={
            "correct": correct,
            "agreement": correct / count,
            "max_phase_error": max_phase_error,
            "max_string_queries_per_matrix_query": max_per_query,
        },
        tolerances={"phase": PHASE_TOL},
    )


def fastforward_witness(n: int, tau: float) -> ExperimentReport:
    """
    R^{(x)n} evolves in closed form, e^{-i R tau} = cos(tau) I - i sin(tau) R,
    because R^{(x)n} squares to the identity; at tau = 2 pi it returns to I.
    Its spectral norm is 1 while ||abs(R^{(x)n})|| = 2^{n/2}.
    """
    started = time.perf_counter()
    r = hadamard_tensor(n)
    u = expm_unitary(r, tau)
    eye = np.eye(r.n)

    identity_deviation = float(np.max(np.abs(u - eye)))
    closed_form = math.cos(tau) * eye - 1j * math.sin(tau) * r.data
    closed_form_error = float(np.max(np.abs(u - closed_form)))

    spectral = spectral_norm(r)
    abs_spectral = spectral_norm(abs_entrywise(r))
    expected_ratio = 2.0 ** (n / 2.0)
    ratio_error = abs(abs_spectral / spectral - expected_ratio) / expected_ratio

    periods = tau / (2.0 * math.pi)
    full_period = abs(periods - round(periods)) <= 1e-12

    passed = (
        closed_form_error <= FASTFORWARD_TOL
        and ratio_error <= SPECTRAL_TOL
        and (not full_period or identity_deviation <= FASTFORWARD_TOL)
    )
    return _finish(
        "fastforward",
        started,
        passed=passed,
        inputs={"n": n, "tau": tau},
        metrics={
            "identity_deviation": identity_deviation,
            "closed_form_error": closed_form_error,
            "full_period": full_period,
            "spectral": spectral,
            "abs_spectral": abs_spectral,
            "one_norm": one_norm(r),
            "abs_to_spectral_ratio": abs_spectral / spectral,
            "expected_ratio": expected_ratio,
        },
        tolerances={"unitary": FASTFORWARD_TOL, "ratio": SPECTRAL_TOL},
    )


def line_transfer_experiment(n: int) -> ExperimentReport:
    """
    |<N| e^{-i H1 pi N / 2} |0>| must be 1; the global phase is reported.
    """
    started = time.perf_counter()
    h = line_hamiltonian(n)
    t = math.pi * n / 2.0
    amplitude = complex(evolve(h, t, basis_state(h.n, 0))[n])
    magnitude = abs(amplitude)
    return _finish(
        "line-transfer",
        started,
        passed=abs(magnitude - 1.0) <= TRANSFER_TOL,
        inputs={"N": n, "t": t},
        metrics={
            "magnitude": magnitude,
            "amplitude_re": amplitude.real,
            "amplitude_im": amplitude.imag,
            "global_phase_over_pi": math.atan2(amplitude.imag, amplitude.real) / math.pi,
        },
        tolerances={"magnitude": TRANSFER_TOL},
    )


def dense_scaling_report(n: int, *, s: BitString | None = None) -> ExperimentReport:
    """
    Norms of H t for the dense parity instance at t = pi N / 2.

    ||H t|| grows like N while max(H t) stays bounded and mcn(H t) grows like
    sqrt(N); parity of N bits costs N/2 queries, so any simulation needs at
    least N/4 queries to H. The bit string does not affect any norm.
    """
    started = time.perf_counter()
    s = s if s is not None else BitString((0,) * n)
    if len(s) != n:
        raise DimensionMismatchError(f"bit string has length {len(s)}, expected {n}")

    h = dense_parity_hamiltonian(s)
    t = math.pi * n / 2.0
    spectral = spectral_norm(h)
    entry = max_norm(h)
    column = mcn(h)

    max_scaled = entry * n
    mcn_scaled = column * math.sqrt(n)
    ranges_apply = n >= DENSE_RANGE_MIN_N
    in_ranges = (
        DENSE_MAX_RANGE[0] <= max_scaled <= DENSE_MAX_RANGE[1]
        and DENSE_MCN_RANGE[0] <= mcn_scaled <= DENSE_MCN_RANGE[1]
    )
    spectral_ok = abs(spectral - 1.0) <= SPECTRAL_TOL

    return _finish(
        "dense-scaling",
        started,
        passed=spectral_ok and (in_ranges or not ranges_apply),
        inputs={"N": n, "S": str(s), "t": t},
        metrics={
            "dimension": h.n,
            "spectral": spectral,
            "spectral_t": spectral * t,
            "expected_spectral_t": t,
            "max_t": entry * t,
            "mcn_t": column * t,
            "max_times_N": max_scaled,
            "mcn_times_sqrt_N": mcn_scaled,
            "ranges_apply": ranges_apply,
            "in_ranges": in_ranges,
            "parity_queries": n / 2.0,
            "simulation_query_lower_bound": n / 4.0,
        },
        tolerances={"spectral": SPECTRAL_TOL},
    )


def trotter_convergence(
    h: HermitianMatrix,
    t: float,
    steps: Sequence[int],
    psi: np.ndarray | list,
) -> ExperimentReport:
    """
    Error of the star-forest product formula against exact evolution.

    The first-order formula has error O(t^2 / steps), so the fitted log-log
    slope of error against steps should be close to -1, and the last error
    should sit within TROTTER_RATIO_SLACK of first-order scaling from the
    first. When every error is below TROTTER_EXACT_TOL (a single star, or
    commuting terms) the formula is exact and neither check applies.
    """
    started = time.perf_counter()
    steps = sorted(set(int(k) for k in steps))
    if len(steps) < 2 or steps[0] < 1:
        raise DomainError("need at least two positive step counts")

    h = hermitian(h)
    decomposition = star_decompose(h)
    exact = evolve(h, t, psi)
    errors = [float(np.linalg.norm(trotter_evolve(decomposition, t, k, psi) - exact)) for k in steps]

    lo, hi = TROTTER_SLOPE_RANGE
    exact_formula = max(errors) <= TROTTER_EXACT_TOL
    if exact_formula:
        slope = 0.0
        decreasing = ratio_ok = slope_ok = True
    else:
        # an exactly zero error would break the log fit
        floor = np.finfo(float).tiny
        slope = float(np.polyfit(np.log(steps), np.log(np.maximum(errors, floor)), 1)[0])
        decreasing = errors[-1] <= errors[0]
        ratio_ok = errors[-1] <= TROTTER_RATIO_SLACK * errors[0] * steps[0] / steps[-1]
        slope_ok = lo <= -slope <= hi
    return _finish(
        "trotter",
        started,
        passed=decreasing and ratio_ok and slope_ok,
        inputs={"n": h.n, "t": t, "steps": steps},
        metrics={
            "errors": errors,
            "slope": slope,
            "terms": len(decomposition.forests),
            "k_prime": decomposition.source_forest_count,
            "stars": decomposition.star_count,
            "exact_formula": exact_formula,
            "decreasing": decreasing,
            "ratio_ok": ratio_ok,
        },
        tolerances={
            "slope_min": lo,
            "slope_max": hi,
            "ratio_slack": TROTTER_RATIO_SLACK,
            "exact": TROTTER_EXACT_TOL,
        },
    )
