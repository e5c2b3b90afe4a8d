"""Command-line entry point: ``swarmsim run|validate|models``."""
import argparse
import sys

from . import kernels
from .bench import write_csv
from .config import parse_config, parse_value
from .controller import SimulationController
from .errors import ParseError, RunawayEvents
from .models import CONFIG_KEYS, registry

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TASK = 3
EXIT_RUNAWAY = 4


def _key_value(text):
    key, eq, value = text.partition("=")
    if not eq or not key or not value:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key, parse_value(value)


def build_parser():
    parser = argparse.ArgumentParser(prog="swarmsim",
                                     description="Large-scale sensor network simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a setup file")
    run.add_argument("config")
    run.add_argument("--seed", type=int, help="run seed (overrides 'set seed=')")
    run.add_argument("--out", help="metrics CSV path (default: standard output)")
    run.add_argument("--param", action="append", type=_key_value, default=[],
                     metavar="KEY=VALUE", help="global parameter, wins over 'set'")
    run.add_argument("--no-timing", action="store_true",
                     help="write wall_ms as 0 so repeated runs are byte-identical")

    val = sub.add_parser("validate", help="parse a setup file without running it")
    val.add_argument("config")

    sub.add_parser("models", help="list registered models and tasks")
    return parser


def _read_program(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"swarmsim: cannot read {path}: {exc.strerror}", file=sys.stderr)
        return None
    try:
        return parse_config(text)
    except ParseError as exc:
        print(f"swarmsim: {path}: {exc}", file=sys.stderr)
        return None


def _peak_rss_mb():
    try:
        import resource
    except ImportError:
        return None
    kb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    return kb / 1024.0 if sys.platform != "darwin" else kb / 2**20


def cmd_run(args):
    program = _read_program(args.config)
    if program is None:
        return EXIT_CONFIG
    # with the CSV on stdout, keep the human-readable lines out of its way
    human = sys.stdout if args.out else sys.stderr
    ctl = SimulationController(seed=args.seed, timing=not args.no_timing, stdout=human)
    for key, value in args.param:
        ctl.set_param(key, value, pin=True)
    try:
        ctl.run_program(program)
    except RunawayEvents as exc:
        print(f"swarmsim: runaway events: {exc}", file=sys.stderr)
        return EXIT_RUNAWAY
    except Exception as exc:  # any task failure aborts the whole run
        print(f"swarmsim: task failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_TASK
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(ctl.rows, fh)
    else:
        write_csv(ctl.rows, sys.stdout)
    rss = _peak_rss_mb()
    if rss is not None:
        print(f"peak RSS {rss:.1f} MB (advisory), kernels: {kernels.BACKEND}", file=human)
    return EXIT_OK


def cmd_validate(args):
    program = _read_program(args.config)
    if program is None:
        return EXIT_CONFIG
    print(f"{args.config}: {len(program)} task invocations")
    return EXIT_OK


def cmd_models(args):
    for key, family in CONFIG_KEYS.items():
        print(f"{key}: {' '.join(registry.identifiers(family))}")
    print(f"tasks: {' '.join(sorted(SimulationController().tasks))}")
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    return {"run": cmd_run, "validate": cmd_validate, "models": cmd_models}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
