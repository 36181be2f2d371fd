"""
Entry point for the SPPA toolkit.

Parses the command line, configures logging and hands the chosen subcommand
to the experiment controller:

    python3 main.py run --config PATH --out DIR [--seed U64] [--iters N]
    python3 main.py verify --config PATH
"""

import argparse
import logging
import sys
from typing import List, Optional

from controllers.experiment_controller import ExperimentController


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sppa",
        description="Stochastic proximal point experiments for random maximal monotone operators.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run all replicas and write traces and a summary")
    run.add_argument("--config", required=True, metavar="PATH", help="experiment JSON file")
    run.add_argument("--out", required=True, metavar="DIR", help="output directory")
    run.add_argument("--seed", type=int, metavar="U64", help="override master_seed")
    run.add_argument("--iters", type=int, metavar="N", help="override iterations")

    verify = commands.add_parser("verify", help="check oracles and certificates without running")
    verify.add_argument("--config", required=True, metavar="PATH", help="experiment JSON file")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main execution routine.

    1. Parses the arguments.
    2. Configures logging (WARNING, or DEBUG with -v).
    3. Dispatches to the controller and returns its exit code.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    controller = ExperimentController()
    if args.command == "run":
        return controller.cmd_run(args.config, args.out, args.seed, args.iters)
    return controller.cmd_verify(args.config)


if __name__ == "__main__":
    sys.exit(main())
