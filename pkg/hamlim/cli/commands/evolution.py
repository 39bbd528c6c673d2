# hamlim/cli/commands/evolution.py
from __future__ import annotations

import argparse

import numpy as np

from hamlim.cli.common import CommandResult, add_matrix_source, common_parser, resolve_matrix
from hamlim.schemas.graph import DecompositionResult
from hamlim.services.experiments import trotter_convergence
from hamlim.services.graphdecomp import (
    arboricity_bound_report,
    decomposition_to_document,
    star_decompose,
)
from hamlim.services.matcore import STATE_NORM_TOL, basis_state, evolve, uniform_state

DEFAULT_TROTTER_STEPS = "8,16,32,64,128,256,512,1024"


def _state_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--basis", type=int, default=0, help="Start in basis state |i> (default 0).")
    group.add_argument("--uniform", action="store_true", help="Start in the uniform superposition.")


def _initial_state(args: argparse.Namespace, n: int) -> np.ndarray:
    return uniform_state(n) if args.uniform else basis_state(n, args.basis)


def _steps(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid step list: {text!r}") from exc


def register(subparsers: argparse._SubParsersAction) -> None:
    evolve_parser = subparsers.add_parser(
        "evolve",
        parents=[common_parser()],
        help="Exact e^{-iHt} psi through the eigendecomposition.",
        description="Apply the unitary e^{-iHt} = V diag(e^{-i lambda t}) V^dagger to a start state.",
    )
    add_matrix_source(evolve_parser)
    evolve_parser.add_argument("--t", type=float, default=1.0, help="Evolution time.")
    _state_options(evolve_parser)
    evolve_parser.set_defaults(handler=handle_evolve)

    decompose = subparsers.add_parser(
        "decompose",
        parents=[common_parser()],
        help="Split H into star forests and check ||abs(H)|| <= 2k mcn(H).",
        description=(
            "Partition the edges of H into k' forests, halve each into two star "
            "forests by parent-depth parity, and check the arboricity bounds "
            "||abs(H)|| <= 2k' mcn(H), ||abs(H)|| <= 2k' ||H||, ||H|| <= 2k' mcn(H). "
            "H must have a zero diagonal. Defaults to a random tree."
        ),
    )
    add_matrix_source(decompose, default_make="tree")
    decompose.set_defaults(handler=handle_decompose)

    trotter = subparsers.add_parser(
        "trotter",
        parents=[common_parser()],
        help="Product-formula simulation over star forests versus exact evolution.",
        description=(
            "Each star evolves in closed form; the first-order product formula over "
            "the star forests converges to e^{-iHt} with error O(1/steps). "
            "Defaults to a random tree."
        ),
    )
    add_matrix_source(trotter, default_make="tree")
    trotter.add_argument("--t", type=float, default=1.0, help="Evolution time.")
    trotter.add_argument(
        "--steps",
        type=_steps,
        default=_steps(DEFAULT_TROTTER_STEPS),
        help=f"Comma-separated step counts (default {DEFAULT_TROTTER_STEPS}).",
    )
    _state_options(trotter)
    trotter.set_defaults(handler=handle_trotter)


def handle_evolve(args: argparse.Namespace) -> CommandResult:
    h = resolve_matrix(args)
    out = evolve(h, args.t, _initial_state(args, h.n))
    norm = float(np.linalg.norm(out))
    payload = {
        "n": h.n,
        "t": args.t,
        "norm": norm,
        "state": [[float(z.real), float(z.imag)] for z in out],
    }
    rows = [{"index": i, "re": float(z.real), "im": float(z.imag)} for i, z in enumerate(out)]
    return CommandResult(
        payload=payload,
        passed=abs(norm - 1.0) <= STATE_NORM_TOL,
        csv_rows=rows,
        csv_columns=["index", "re", "im"],
    )


def handle_decompose(args: argparse.Namespace) -> CommandResult:
    h = resolve_matrix(args)
    decomposition = star_decompose(h)
    report = arboricity_bound_report(h, decomposition)
    result = DecompositionResult(
        decomposition=decomposition_to_document(decomposition),
        report=report,
    )
    return CommandResult(
        payload=result,
        passed=report.passed,
        csv_rows=[check.model_dump() for check in report.checks],
        csv_columns=["name", "lhs", "rhs", "slack", "ok"],
    )


def handle_trotter(args: argparse.Namespace) -> CommandResult:
    h = resolve_matrix(args)
    report = trotter_convergence(h, args.t, args.steps, _initial_state(args, h.n))
    return CommandResult(payload=report, passed=report.passed)
