# hamlim/cli/commands/norms.py
from __future__ import annotations

import argparse

from hamlim.cli.common import CommandResult, add_matrix_source, common_parser, resolve_matrix
from hamlim.services.norms import (
    CHAIN_CSV_COLUMNS,
    chain_rows,
    norm_chain_report,
    norm_profile,
    walk_cost_estimate,
)


def _zero_tol(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--zero-tol",
        type=float,
        default=0.0,
        help="Entries with |H_ij| <= this count as zero for the row sparsity k.",
    )


def register(subparsers: argparse._SubParsersAction) -> None:
    norms = subparsers.add_parser(
        "norms",
        parents=[common_parser()],
        help="max, mcn, spectral, abs-spectral and induced 1-norm of a matrix.",
        description="Report the five norms that bound simulation cost, plus N and row sparsity k.",
    )
    add_matrix_source(norms)
    _zero_tol(norms)
    norms.set_defaults(handler=handle_norms)

    chain = subparsers.add_parser(
        "chain",
        parents=[common_parser()],
        help="Check max <= mcn <= ||H|| <= ||abs(H)|| <= ||H||_1 <= sqrt(N) mcn <= N max.",
        description=(
            "Evaluate every link of the norm chain, its k-sparse form with sqrt(k) "
            "and k in place of sqrt(N) and N, and the identities mcn(abs(H)) = mcn(H), "
            "||abs(H)||_1 = ||H||_1. Exit 1 if any link fails."
        ),
    )
    add_matrix_source(chain)
    _zero_tol(chain)
    chain.set_defaults(handler=handle_chain)

    cost = subparsers.add_parser(
        "cost",
        parents=[common_parser()],
        help="Walk step estimate ||abs(H)|| |t| / sqrt(delta).",
        description=(
            "Steps of a walk-based simulation scale with ||abs(Ht)|| / sqrt(delta); "
            "the spectral-norm scaling is reported for comparison."
        ),
    )
    add_matrix_source(cost)
    cost.add_argument("--t", type=float, default=1.0, help="Evolution time.")
    cost.add_argument("--delta", type=float, default=0.01, help="Target error in (0, 1].")
    cost.set_defaults(handler=handle_cost)


def handle_norms(args: argparse.Namespace) -> CommandResult:
    return CommandResult(payload=norm_profile(resolve_matrix(args), zero_tol=args.zero_tol))


def handle_chain(args: argparse.Namespace) -> CommandResult:
    report = norm_chain_report(resolve_matrix(args), zero_tol=args.zero_tol)
    return CommandResult(
        payload=report,
        passed=report.all_ok,
        csv_rows=chain_rows(report),
        csv_columns=CHAIN_CSV_COLUMNS,
    )


def handle_cost(args: argparse.Namespace) -> CommandResult:
    return CommandResult(payload=walk_cost_estimate(resolve_matrix(args), args.t, args.delta))
