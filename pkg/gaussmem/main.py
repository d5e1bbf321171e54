"""
Command-line front end.

    python -m gaussmem capacity --kappa 0.9 --mu 0.8 --nbar 1 --energy 8
    python -m gaussmem sweep --var nbar --from 0 --to 4 --steps 41 \\
        --kappa 0.9 --mu 0.8 --energy 8 --quantity z0_fraction

Exit codes: 0 success, 1 domain error, 2 solver failure, 64 usage error.
"""
import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from gaussmem import __version__
from gaussmem.commands import compute, simulate, sweep
from gaussmem.config import settings
from gaussmem.errors import DomainError, GaussMemError, SolverError, UsageError
from gaussmem.models.options import CheckKind, OutputFormat, RunOptions
from gaussmem.output.writer import Table, write_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_SOLVER = 2
EXIT_USAGE = 64

COMMANDS: Dict[str, Callable[[RunOptions], Table]] = {
    "capacity": compute.capacity,
    "spectrum": compute.spectrum,
    "waterfill": compute.waterfill,
    "additive": compute.additive,
    "bounds": compute.bounds,
    "simulate": simulate.simulate,
    "sweep": sweep.sweep,
}

# config-file keys that differ from RunOptions field names
CONFIG_ALIASES = {"from": "start", "to": "stop"}


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that raises UsageError instead of exiting with status 2"""

    def error(self, message: str):
        raise UsageError(message)


def _common_options() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False)
    channel = common.add_argument_group("channel")
    channel.add_argument("--kappa", type=float, help="Gain or transmissivity of each use")
    channel.add_argument("--mu", type=float, help="Memory beam-splitter transmissivity")
    channel.add_argument("--nbar", type=float, help="Thermal photons in the environment (default 0)")
    channel.add_argument("--energy", type=float, help="Mean input photons per use")
    channel.add_argument("--n", type=int, help="Number of channel uses")
    channel.add_argument("--nc", type=float, help="Added noise N_C of the additive limit")

    run = common.add_argument_group("output and run control")
    run.add_argument("--format", choices=[f.value for f in OutputFormat], help="Output format (default csv)")
    run.add_argument("--out", help="Write output to this path instead of stdout")
    run.add_argument("--config", help="key=value file with default flag values")
    run.add_argument("--tol", type=float, help="Quadrature tolerance")
    run.add_argument("--workers", type=int, help="Worker processes for sweeps")
    run.add_argument("--verbose", action="store_true", default=None, help="Log at DEBUG level")
    return common


def build_parser() -> ArgumentParser:
    common = _common_options()
    parser = ArgumentParser(prog="gaussmem",
                            description="Classical capacity of Gaussian thermal memory channels")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", parser_class=ArgumentParser)

    capacity = commands.add_parser("capacity", parents=[common], help="Capacity in nats per use")
    capacity.add_argument("--no-special", action="store_true", default=None,
                          help="Always integrate, even at closed-form parameter points")

    for name, help_text in (("spectrum", "Finite spectrum (with --n) or eta(z)"),
                            ("waterfill", "Optimal photon distribution N(z)")):
        command = commands.add_parser(name, parents=[common], help=help_text)
        command.add_argument("--steps", type=int, help="Points on the z grid (default 101)")

    additive = commands.add_parser("additive", parents=[common], help="Additive-noise limit capacity")
    additive.add_argument("--clipped", action="store_true", default=None,
                          help="Water-fill with the positive part, valid for any energy")

    bounds = commands.add_parser("bounds", parents=[common], help="Finite-P capacity bounds")
    bounds.add_argument("--p", type=int, help="Number of mode groups P")
    bounds.add_argument("--ell", type=int, nargs="+", help="Group sizes to combine")

    simulate_cmd = commands.add_parser("simulate", parents=[common],
                                       help="Mode propagation against the closed forms")
    simulate_cmd.add_argument("--check", nargs="+", choices=[c.value for c in CheckKind],
                              help="Checks to run (default closed-form and bogoliubov)")

    sweep_cmd = commands.add_parser("sweep", parents=[common], help="Parameter sweep")
    sweep_cmd.add_argument("--var", help="Swept variable: nbar, kappa, mu, energy or n_uses")
    sweep_cmd.add_argument("--from", dest="start", type=float, help="First grid value")
    sweep_cmd.add_argument("--to", dest="stop", type=float, help="Last grid value")
    sweep_cmd.add_argument("--steps", type=int, help="Number of grid points")
    sweep_cmd.add_argument("--quantity", nargs="+",
                           help="capacity, z0_fraction, e_crit, n_crit, or one of n_of_z / spectrum")
    sweep_cmd.add_argument("--z-steps", type=int, help="Points on the z grid for profile quantities")
    return parser


def load_options(args: argparse.Namespace) -> RunOptions:
    """
    Merge defaults, the --config file and command-line flags, in that order.

    Raises:
        UsageError: On unknown config keys or values that do not parse
    """
    merged: Dict[str, Any] = {}
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            with open(config_path) as handle:
                file_values = dotenv_values(stream=handle)
        except OSError as e:
            raise UsageError(f"Cannot read config file {config_path}: {e}")
        for key, value in file_values.items():
            name = key.strip().lower().replace("-", "_")
            merged[CONFIG_ALIASES.get(name, name)] = value

    flags = {key: value for key, value in vars(args).items()
             if value is not None and key != "config"}
    merged.update(flags)

    try:
        return RunOptions(**merged)
    except ValidationError as e:
        error = e.errors()[0]
        location = ".".join(str(part) for part in error["loc"])
        raise UsageError(f"Invalid option {location}: {error['msg']}")


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else settings.log_level.upper()
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", force=True)


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run one command and write its table; returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        options = load_options(args)
        _configure_logging(options.verbose)
        quad_tol = settings.quad_tol
        if options.tol is not None:
            settings.quad_tol = options.tol
        try:
            table = COMMANDS[options.command](options)
        finally:
            settings.quad_tol = quad_tol
        write_table(table, options.format, options.out)
        return EXIT_OK
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except SolverError as e:
        logger.error(f"Solver failure: {e}")
        return EXIT_SOLVER
    except (DomainError, ValidationError) as e:
        logger.error(f"Domain error: {e}")
        return EXIT_DOMAIN
    except GaussMemError as e:
        logger.error(str(e))
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
