# hamlim/cli/commands/demos.py
from __future__ import annotations

import argparse
import math

from hamlim.cli.common import CommandResult, command_rng, common_parser, resolve_seed
from hamlim.schemas.experiments import ExperimentReport
from hamlim.services.experiments import (
    dense_scaling_report,
    fastforward_witness,
    line_transfer_experiment,
    parity_experiment,
    parity_sweep,
    sign_detection_experiment,
    sign_sweep,
)
from hamlim.services.instances import BitString, SignString
from hamlim.services.stochastic import PromiseConfig


def register(subparsers: argparse._SubParsersAction) -> None:
    parity = subparsers.add_parser(
        "parity-demo",
        parents=[common_parser()],
        help="Parity of S from evolving the dense instance for t = pi N / 2.",
        description=(
            "Simulating the dense parity Hamiltonian for time pi N / 2 reveals the "
            "parity of N bits, which needs N/2 queries, even though max(Ht) stays "
            "bounded and mcn(Ht) grows only like sqrt(N). Give --bits for one "
            "string, otherwise --count random N-bit strings are checked."
        ),
    )
    parity.add_argument("--bits", default=None, help="Bit string S, e.g. 0110.")
    parity.add_argument("--n", type=int, default=8, help="Length of random strings.")
    parity.add_argument("--count", type=int, default=10, help="Number of random strings.")
    parity.set_defaults(handler=handle_parity)

    sign = subparsers.add_parser(
        "sign-demo",
        parents=[common_parser()],
        help="Sign of sum(s) from the eigenphase of e^{-i H_s tau}.",
        description=(
            "For a promise string with sum(s) = -B or +B, the uniform state is an "
            "eigenvector of the circulant H_s with eigenvalue 2 sum(s); evolving for "
            "tau = pi / (4B) gives phase -i or +i, revealing the sign. H_s is "
            "rebuilt through a counted phase oracle using at most one string query "
            "per matrix query. Give --signs for one string, otherwise --count "
            "sampled promise strings of length --M are checked."
        ),
    )
    sign.add_argument("--signs", default=None, help="Sign string s, e.g. +++-+.")
    sign.add_argument("--M", type=int, default=60, help="Length of sampled strings.")
    sign.add_argument("--count", type=int, default=50, help="Number of sampled strings.")
    sign.add_argument(
        "--randomize",
        action="store_true",
        help="Randomly permute and globally negate each instance first.",
    )
    sign.set_defaults(handler=handle_sign)

    fastforward = subparsers.add_parser(
        "fastforward",
        parents=[common_parser()],
        help="R^(x)n returns to I at tau = 2 pi although ||abs(R^(x)n)|| = 2^(n/2).",
        description=(
            "The tensor power of the Hadamard matrix is easy to simulate for any "
            "time, e^{-iR tau} = cos(tau) I - i sin(tau) R, even though its "
            "abs-spectral norm exceeds its spectral norm by 2^(n/2)."
        ),
    )
    fastforward.add_argument("--n", type=int, default=6, help="Number of tensor factors.")
    fastforward.add_argument("--tau", type=float, default=2.0 * math.pi)
    fastforward.set_defaults(handler=handle_fastforward)

    line = subparsers.add_parser(
        "line-demo",
        parents=[common_parser()],
        help="Perfect transfer |0> -> |N> along the weighted line at t = pi N / 2.",
        description="Evolve |0> under the line Hamiltonian for pi N / 2 and report the |N> amplitude.",
    )
    line.add_argument("--n", type=int, default=8)
    line.set_defaults(handler=handle_line)

    scaling = subparsers.add_parser(
        "scaling",
        parents=[common_parser()],
        help="||Ht||, max(Ht) and mcn(Ht) of the dense parity instance at t = pi N / 2.",
        description=(
            "||Ht|| = pi N / 2 while max(Ht) = Theta(1) and mcn(Ht) = Theta(sqrt(N)); "
            "simulation still needs at least N/4 queries, so no simulation can "
            "run in time sublinear in ||Ht||."
        ),
    )
    scaling.add_argument("--n", type=int, default=16)
    scaling.add_argument("--bits", default=None, help="Optional bit string; norms do not depend on it.")
    scaling.set_defaults(handler=handle_scaling)


def _summary(report: ExperimentReport) -> CommandResult:
    return CommandResult(payload=report, passed=report.passed)


def handle_parity(args: argparse.Namespace) -> CommandResult:
    if args.bits:
        return _summary(parity_experiment(BitString.parse(args.bits)).report)
    return _summary(parity_sweep(args.n, args.count, resolve_seed(args)))


def handle_sign(args: argparse.Namespace) -> CommandResult:
    if args.signs:
        s = SignString.parse(args.signs)
        cfg = PromiseConfig(M=len(s), B=abs(s.total))
        seed = command_rng(args) if args.randomize else None
        return _summary(sign_detection_experiment(s, cfg, randomize_seed=seed).report)
    return _summary(sign_sweep(args.M, args.count, resolve_seed(args), randomize=args.randomize))


def handle_fastforward(args: argparse.Namespace) -> CommandResult:
    return _summary(fastforward_witness(args.n, args.tau))


def handle_line(args: argparse.Namespace) -> CommandResult:
    return _summary(line_transfer_experiment(args.n))


def handle_scaling(args: argparse.Namespace) -> CommandResult:
    bits = BitString.parse(args.bits) if args.bits else None
    return _summary(dense_scaling_report(args.n, s=bits))
