# hamlim/services/norms.py
from __future__ import annotations

import logging
import math

import numpy as np

from hamlim.core.config import get_settings
from hamlim.core.errors import DomainError
from hamlim.schemas.norms import ChainReport, InequalityCheck, NormProfile, WalkCostEstimate
from hamlim.services.matcore import HermitianMatrix, abs_entrywise, eigh, hermitian

logger = logging.getLogger(__name__)


def max_norm(h: HermitianMatrix) -> float:
    return float(np.max(np.abs(hermitian(h).data)))


def mcn(h: HermitianMatrix) -> float:
    """Maximum Euclidean norm of the columns."""
    return float(np.max(np.linalg.norm(hermitian(h).data, axis=0)))


def one_norm(h: HermitianMatrix) -> float:
    """Maximum absolute column sum."""
    return float(np.max(np.sum(np.abs(hermitian(h).data), axis=0)))


def row_sparsity(h: HermitianMatrix, zero_tol: float = 0.0) -> int:
    """
    Largest count of entries with |H_ij| > zero_tol in any row.

    The default threshold is exact structural nonzero.
    """
    mask = np.abs(hermitian(h).data) > zero_tol
    return int(np.max(np.sum(mask, axis=1)))


def norm_profile(h: HermitianMatrix, *, zero_tol: float = 0.0) -> NormProfile:
    """
    Compute max, mcn, spectral, abs-spectral and induced 1-norm of H.

    Both spectral quantities come from the eigendecomposition; for abs(H)
    the largest eigenvalue magnitude is its Perron root.
    """
    h = hermitian(h)
    spectral = eigh(h).spectral_norm
    abs_spectral = eigh(abs_entrywise(h)).spectral_norm

    profile = NormProfile(
        n=h.n,
        k=row_sparsity(h, zero_tol=zero_tol),
        max_norm=max_norm(h),
        mcn=mcn(h),
        spectral=spectral,
        abs_spectral=abs_spectral,
        one_norm=one_norm(h),
    )
    logger.debug("norm profile n=%d: %s", h.n, profile.model_dump())
    return profile


def inequality_check(name: str, lhs: float, rhs: float) -> InequalityCheck:
    settings = get_settings()
    slack = (rhs - lhs) / max(abs(rhs), settings.SLACK_FLOOR)
    return InequalityCheck(
        name=name,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        ok=slack >= -settings.CHAIN_RELATIVE_SLACK,
    )


def equality_check(name: str, a: float, b: float) -> InequalityCheck:
    settings = get_settings()
    slack = -abs(a - b) / max(abs(a), abs(b), settings.SLACK_FLOOR)
    return InequalityCheck(
        name=name,
        lhs=a,
        rhs=b,
        slack=slack,
        ok=slack >= -settings.CHAIN_RELATIVE_SLACK,
    )


def _chain(p: NormProfile, size: int, label: str) -> list[InequalityCheck]:
    root = math.sqrt(size)
    return [
        inequality_check("max<=mcn", p.max_norm, p.mcn),
        inequality_check("mcn<=spectral", p.mcn, p.spectral),
        inequality_check("spectral<=abs_spectral", p.spectral, p.abs_spectral),
        inequality_check("abs_spectral<=one_norm", p.abs_spectral, p.one_norm),
        inequality_check(f"one_norm<=sqrt({label})*mcn", p.one_norm, root * p.mcn),
        inequality_check(f"sqrt({label})*mcn<={label}*max", root * p.mcn, size * p.max_norm),
    ]


def norm_chain_report(h: HermitianMatrix, *, zero_tol: float = 0.0) -> ChainReport:
    """
    Evaluate every link of the general chain

        max <= mcn <= ||H|| <= ||abs(H)|| <= ||H||_1 <= sqrt(N) mcn <= N max

    and of the sparse chain with the measured row sparsity k in place of N.
    Also checks mcn(abs(H)) = mcn(H), ||abs(H)||_1 = ||H||_1 and
    ||abs(H)|| <= sqrt(N) ||H||.

    The report is a pure function of the matrix entries.
    """
    h = hermitian(h)
    profile = norm_profile(h, zero_tol=zero_tol)
    absolute = abs_entrywise(h)

    general = _chain(profile, profile.n, "N")
    sparse = _chain(profile, profile.k, "k")
    identities = [
        equality_check("mcn(abs(H))==mcn(H)", mcn(absolute), profile.mcn),
        equality_check("one_norm(abs(H))==one_norm(H)", one_norm(absolute), profile.one_norm),
    ]
    abs_spectral_bound = inequality_check(
        "abs_spectral<=sqrt(N)*spectral",
        profile.abs_spectral,
        math.sqrt(profile.n) * profile.spectral,
    )

    report = ChainReport(
        profile=profile,
        general_chain=general,
        sparse_chain=sparse,
        sparse_applicable=profile.k < profile.n,
        identities=identities,
        general_chain_ok=all(link.ok for link in general),
        sparse_chain_ok=all(link.ok for link in sparse),
        identities_ok=all(link.ok for link in identities),
        abs_spectral_bound=abs_spectral_bound,
    )
    if not report.all_ok:
        failed = [c.name for c in general + sparse + identities + [abs_spectral_bound] if not c.ok]
        logger.warning("norm chain violated for n=%d: %s", profile.n, failed)
    return report


def chain_rows(report: ChainReport) -> list[dict[str, object]]:
    """
    One row per inequality, for the fixed-column CSV projection
    (name, lhs, rhs, slack, ok). Row names carry their chain as a prefix.
    """
    rows: list[dict[str, object]] = []
    for chain_name, links in (
        ("general", report.general_chain),
        ("sparse", report.sparse_chain),
        ("identity", report.identities),
        ("bound", [report.abs_spectral_bound]),
    ):
        for link in links:
            rows.append(
                {
                    "name": f"{chain_name}:{link.name}",
                    "lhs": link.lhs,
                    "rhs": link.rhs,
                    "slack": link.slack,
                    "ok": link.ok,
                }
            )
    return rows


CHAIN_CSV_COLUMNS = ["name", "lhs", "rhs", "slack", "ok"]


def walk_cost_estimate(h: HermitianMatrix, t: float, delta: float) -> WalkCostEstimate:
    """
    Step counts of a walk-based simulation, ||abs(Ht)|| / sqrt(delta), with
    the induced 1-norm variant alongside.

    Raises
    ------
    DomainError
        If delta is outside (0, 1] or t is not finite.
    """
    if not (0.0 < delta <= 1.0):
        raise DomainError(f"delta must lie in (0, 1], got {delta}")
    if not math.isfinite(t):
        raise DomainError("t must be finite")

    profile = norm_profile(h)
    scale = abs(t) / math.sqrt(delta)
    return WalkCostEstimate(
        t=t,
        delta=delta,
        steps_abs=profile.abs_spectral * scale,
        steps_one=profile.one_norm * scale,
        spectral_steps=profile.spectral * scale,
    )
