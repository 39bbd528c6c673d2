# hamlim/cli/commands/bounds.py
from __future__ import annotations

import argparse

from hamlim.cli.common import CommandResult, common_parser, resolve_seed
from hamlim.core.config import get_settings
from hamlim.services.stochastic import (
    adversary_bound,
    average_case_bound,
    derive_promise_bound,
    promise_probability,
    tail_estimate,
)


def register(subparsers: argparse._SubParsersAction) -> None:
    tail = subparsers.add_parser(
        "tail",
        parents=[common_parser()],
        help="Monte Carlo Pr(||H_s|| >= 4d sqrt(M ln M)) against 4/M^(2d^2-1).",
        description=(
            "Sample uniform sign strings, read ||H_s|| off the closed-form circulant "
            "spectrum, and compare the empirical tail with the Hoeffding-based bound "
            "and its explicit union-bound form. Exit 1 if the estimate exceeds a "
            "bound by more than 3 standard errors."
        ),
    )
    tail.add_argument("--M", type=int, default=51, help="String length M (N = 2M + 1).")
    tail.add_argument("--d", type=float, default=1.0, help="Threshold multiplier d > 0.")
    tail.add_argument("--trials", type=int, default=2000)
    tail.add_argument("--eigen-index", type=int, default=1, help="r for the single-eigenvalue check.")
    tail.add_argument(
        "--workers",
        type=int,
        default=None,
        help="Threads for the trials (default TAIL_WORKERS); results do not depend on it.",
    )
    tail.set_defaults(handler=handle_tail)

    promise = subparsers.add_parser(
        "promise",
        parents=[common_parser()],
        help="Exact and asymptotic probability that |sum(s)| = B.",
        description=(
            "2 C(M, (M+B)/2) / 2^M with big-integer binomials, against "
            "2 exp(-B^2 / 2M) / sqrt(pi M / 2). With B ~ sqrt(M ln M) the "
            "probability is Theta(1/M). B defaults to the parity-adjusted "
            "round(sqrt(M ln M))."
        ),
    )
    promise.add_argument("--M", type=int, required=True)
    promise.add_argument("--B", type=int, default=None)
    promise.set_defaults(handler=handle_promise)

    adversary = subparsers.add_parser(
        "adversary",
        parents=[common_parser()],
        help="Adversary lower bound m/l = (M/B + 1)/2 for the sum-sign problem.",
        description=(
            "m = C(M/2 + B/2, B), l = C(M/2 + B/2 - 1, B - 1) as exact integers; "
            "checks m/l = (M/B + 1)/2 as rationals and reports the approximate "
            "counting estimate 2M/B. M and B must be even."
        ),
    )
    adversary.add_argument("--M", type=int, required=True)
    adversary.add_argument("--B", type=int, required=True)
    adversary.set_defaults(handler=handle_adversary)

    avg = subparsers.add_parser(
        "avg-bound",
        parents=[common_parser()],
        help="Average-case cost (ln M)^c against the sqrt(M / ln M) lower bound.",
        description=(
            "Cost of a hypothetical average-case simulator using (ln M)^c queries "
            "per unit of ||Ht||: the typical term (pi d ln M)^c plus the large-norm "
            "term weighted by its conditional probability. Once the total drops "
            "below sqrt(M / ln M) such a simulator would beat the query lower bound."
        ),
    )
    avg.add_argument("--M", type=int, required=True)
    avg.add_argument("--c", type=float, default=1.0)
    avg.add_argument("--d", type=float, default=2.0)
    avg.set_defaults(handler=handle_avg_bound)


def handle_tail(args: argparse.Namespace) -> CommandResult:
    workers = args.workers if args.workers is not None else get_settings().TAIL_WORKERS
    report = tail_estimate(
        args.M,
        args.d,
        args.trials,
        resolve_seed(args),
        eigen_index=args.eigen_index,
        workers=workers,
    )
    return CommandResult(
        payload=report,
        passed=report.within_lemma and report.within_union and report.within_eigen,
    )


def handle_promise(args: argparse.Namespace) -> CommandResult:
    b = args.B if args.B is not None else derive_promise_bound(args.M).B
    return CommandResult(payload=promise_probability(args.M, b))


def handle_adversary(args: argparse.Namespace) -> CommandResult:
    report = adversary_bound(args.M, args.B)
    return CommandResult(
        payload=report,
        passed=report.ratio_identity_ok and report.product_identity_ok,
    )


def handle_avg_bound(args: argparse.Namespace) -> CommandResult:
    return CommandResult(payload=average_case_bound(args.M, args.c, args.d))
