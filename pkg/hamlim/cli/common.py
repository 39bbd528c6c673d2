# hamlim/cli/common.py
from __future__ import annotations

import argparse
from dataclasses import dataclass
from typing import Any, Mapping, Optional, Union

import numpy as np
from pydantic import BaseModel

from hamlim.core.config import get_settings
from hamlim.core.errors import DomainError
from hamlim.services.graphdecomp import random_star, random_tree, star_matrix
from hamlim.services.instances import (
    BitString,
    SignString,
    circulant_from_string,
    dense_parity_hamiltonian,
    hadamard_tensor,
    line_hamiltonian,
    parity_hamiltonian,
    random_bitstring,
    random_sign_string,
    saturating_witness,
    WitnessKind,
)
from hamlim.services.matcore import HermitianMatrix, random_hermitian
from hamlim.services.serialization import load_matrix
from hamlim.services.stochastic import trial_rng

MAKE_KINDS = (
    "line",
    "parity",
    "dense-parity",
    "circulant",
    "hadamard",
    "witness",
    "random",
    "tree",
    "star",
)

DEFAULT_SIZE = 8


@dataclass
class CommandResult:
    """
    What a command hands back to the dispatcher: the report to print, whether
    its checks passed, and an optional row projection for CSV output.
    """

    payload: Union[BaseModel, Mapping[str, Any]]
    passed: bool = True
    csv_rows: Optional[list[dict[str, Any]]] = None
    csv_columns: Optional[list[str]] = None


def common_parser() -> argparse.ArgumentParser:
    """Options shared by every subcommand."""
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("output")
    group.add_argument(
        "--seed",
        type=int,
        default=None,
        help="64-bit master seed (default: HAMLIM_SEED, then 0).",
    )
    group.add_argument("--out", default=None, help="Also write the report to this file.")
    group.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
    group.add_argument(
        "--no-timestamp",
        action="store_true",
        help="Omit generated_at and wall_time_seconds so identical runs give identical bytes.",
    )
    group.add_argument(
        "--log-level",
        default=None,
        help="Logging level on stderr (default: HAMLIM_LOG_LEVEL).",
    )
    return parser


def resolve_seed(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else get_settings().HAMLIM_SEED
    if not 0 <= seed < 2**64:
        raise DomainError("seed must be a 64-bit non-negative integer")
    return seed


def command_rng(args: argparse.Namespace) -> np.random.Generator:
    return trial_rng(resolve_seed(args), 0)


def add_generator_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("generator")
    group.add_argument(
        "--n",
        type=int,
        default=None,
        help=(
            "Size parameter: N for line/parity, M for circulant, factors for "
            "hadamard, dimension for witness/random/tree, leaves for star."
        ),
    )
    group.add_argument("--bits", default=None, help="Bit string S for parity kinds, e.g. 0110.")
    group.add_argument("--signs", default=None, help="Sign string s for circulant, e.g. +-+ or 1,-1,1.")
    group.add_argument(
        "--witness",
        choices=[kind.value for kind in WitnessKind],
        default=WitnessKind.IDENTITY.value,
        help="Saturating witness for --make witness.",
    )
    group.add_argument("--density", type=float, default=1.0, help="Off-diagonal density for random.")
    group.add_argument("--real", action="store_true", help="Real entries for random.")
    group.add_argument(
        "--unit-weights",
        action="store_true",
        help="Unit-modulus edge weights for tree and star.",
    )


def add_matrix_source(parser: argparse.ArgumentParser, *, default_make: str | None = None) -> None:
    """--in PATH or --make KIND plus generator options."""
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--in", dest="input", default=None, help="densecomplex-v1 matrix file.")
    source.add_argument("--make", choices=MAKE_KINDS, default=None, help="Generate the matrix instead.")
    parser.set_defaults(default_make=default_make)
    add_generator_options(parser)


def build_matrix(kind: str, args: argparse.Namespace) -> HermitianMatrix:
    n = args.n if args.n is not None else DEFAULT_SIZE
    rng = command_rng(args)
    magnitude = (1.0, 1.0) if args.unit_weights else (0.5, 1.0)

    if kind == "line":
        return line_hamiltonian(n)
    if kind in ("parity", "dense-parity"):
        bits = BitString.parse(args.bits) if args.bits else random_bitstring(n, rng)
        if kind == "parity":
            return parity_hamiltonian(bits)
        return dense_parity_hamiltonian(bits)
    if kind == "circulant":
        signs = SignString.parse(args.signs) if args.signs else random_sign_string(n, rng)
        return circulant_from_string(signs)
    if kind == "hadamard":
        return hadamard_tensor(n)
    if kind == "witness":
        return saturating_witness(args.witness, n)
    if kind == "random":
        return random_hermitian(n, rng, real=args.real, density=args.density)
    if kind == "tree":
        return random_tree(n, rng, magnitude=magnitude)
    if kind == "star":
        return star_matrix(random_star(n, rng, magnitude=magnitude), n + 1)
    raise DomainError(f"unknown matrix kind: {kind!r}")


def resolve_matrix(args: argparse.Namespace) -> HermitianMatrix:
    if args.input:
        return load_matrix(args.input)
    kind = args.make or args.default_make
    if kind is None:
        raise DomainError("give a matrix with --in PATH or --make KIND")
    return build_matrix(kind, args)
