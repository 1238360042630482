"""Command-line driver: ``qscissors {sweep,figure,validate,list-presets}``."""

import argparse
import logging
import sys

from . import __version__
from .errors import DegenerateConfigurationError, QsdError, UsageError
from .presets import PRESETS, describe, preset_configs
from .sweep import load_config, run_sweep

log = logging.getLogger("qscissors")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", help="output directory (default: current)")
    common.add_argument("--cutoff", type=int, help="fixed Fock cutoff for every mode (default: automatic)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for grid evaluation")
    common.add_argument("--seed", help=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="qscissors", description=__doc__)
    parser.add_argument("--version", action="version", version=f"qscissors {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("sweep", parents=[common], help="run a sweep file")
    p.add_argument("config")
    p = sub.add_parser("figure", parents=[common], help="regenerate the data of a figure preset")
    p.add_argument("preset")
    p = sub.add_parser("validate", parents=[common], help="check a sweep file without running it")
    p.add_argument("config")
    sub.add_parser("list-presets", parents=[common], help="list figure presets")
    return parser


def _run(configs, args):
    for cfg in configs:
        for path in run_sweep(cfg, args.out, threads=args.threads, cutoff=args.cutoff):
            print(path)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.seed is not None:
        print("qscissors: --seed is not supported: the simulation is deterministic", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        if args.command == "list-presets":
            for name in PRESETS:
                print(f"{name}\t{describe(name)}")
        elif args.command == "validate":
            cfg = load_config(args.config)
            print(f"ok: {cfg.row_count()} grid points, observables {', '.join(cfg.observables)}")
        elif args.command == "sweep":
            _run([load_config(args.config)], args)
        elif args.command == "figure":
            _run(preset_configs(args.preset), args)
    except UsageError as exc:
        print(f"qscissors: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except DegenerateConfigurationError as exc:
        print(f"qscissors: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except QsdError as exc:
        print(f"qscissors: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
