# hamlim/cli/commands/make.py
from __future__ import annotations

import argparse

from hamlim.cli.common import (
    MAKE_KINDS,
    CommandResult,
    add_generator_options,
    build_matrix,
    common_parser,
)
from hamlim.services.serialization import matrix_to_document


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "make",
        parents=[common_parser()],
        help="Generate a Hamiltonian as a densecomplex-v1 document.",
        description=(
            "Build one of the hard or extremal instances:\n"
            "- line: path whose evolution for time pi N / 2 carries |0> to |N>\n"
            "- parity / dense-parity: the parity instance and its dense blow-up\n"
            "  H2 (x) J / N, whose norm is 1 while max and mcn shrink with N\n"
            "- circulant: the sign-string circulant whose lambda_0 = 2 sum(s)\n"
            "- hadamard / witness: matrices that make the norm inequalities tight\n"
            "- random / tree / star: seeded test inputs"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("kind", choices=MAKE_KINDS)
    add_generator_options(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> CommandResult:
    h = build_matrix(args.kind, args)
    doc = matrix_to_document(h)
    rows = [
        {"i": index // doc.n, "j": index % doc.n, "re": re, "im": im}
        for index, (re, im) in enumerate(doc.entries)
    ]
    return CommandResult(payload=doc, csv_rows=rows, csv_columns=["i", "j", "re", "im"])
