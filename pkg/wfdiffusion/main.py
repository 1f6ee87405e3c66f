# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import sys

from inators.arg import add_log_level_argument, add_version_argument, process_log_level_argument

from .cli import (add_config_arguments, add_jobs_argument, EXIT_IO, EXIT_PRECONDITION, EXIT_USAGE, init_logging, logger,
                  process_config_arguments, UsageArgumentParser)
from .errors import UsageError, WFDiffusionError
from .pkgdata import __version__
from .plan import cmd_plan
from .simulate import cmd_simulate
from .verify import checks, cmd_verify


def build_parser():
    parser = UsageArgumentParser(description='wfdiffusion: Wright-Fisher diffusion laboratory', epilog="""
        The tool plans the Lyapunov parameters certifying exponential
        recurrence and boundary inattainability of the Wright-Fisher
        diffusion with mutations, simulates its paths, and verifies the
        resulting bounds and the convergence to the invariant law.
        """)
    add_version_argument(parser, version=__version__)
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND', required=True)

    plan_parser = subparsers.add_parser('plan', help='compute and save the recurrence and boundary plans.')
    plan_parser.set_defaults(run=cmd_plan)

    simulate_parser = subparsers.add_parser('simulate', help='simulate a batch of paths and dump them as CSV.')
    simulate_parser.set_defaults(run=cmd_simulate)

    verify_parser = subparsers.add_parser('verify', help='verify bounds and convergence claims by simulation.')
    verify_parser.add_argument('which', metavar='CHECK', choices=sorted(checks.keys()) + ['all'],
                               help='check to run (choices: %(choices)s).')
    verify_parser.set_defaults(run=cmd_verify)

    for subparser in (plan_parser, simulate_parser, verify_parser):
        add_config_arguments(subparser)
        add_jobs_argument(subparser)
        add_log_level_argument(subparser, short_alias=())
    return parser


def execute(argv=None):
    """
    Entry point of the ``wfdiffusion`` command. Exits with the code of the
    subcommand: 0 on success (all verdicts pass), 1 if a verdict fails, 2 if a
    precondition (e.g., Feller's condition) does not hold, 3 if a verdict is
    inconclusive, 64 on usage errors, and 74 on I/O errors.
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    init_logging()
    process_log_level_argument(args, logger)

    try:
        process_config_arguments(args)
        code = args.run(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        logger.error('%s', e)
        code = EXIT_USAGE
    except WFDiffusionError as e:
        logger.error('%s', e)
        code = EXIT_PRECONDITION
    except OSError as e:
        logger.error('%s', e)
        code = EXIT_IO
    sys.exit(code)


if __name__ == '__main__':
    execute()
