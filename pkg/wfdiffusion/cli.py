# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import logging
import os
import sys

from argparse import ArgumentParser

from .config import load_config
from .pkgdata import __version__
from .tool import CsvReportWriter, JsonReportWriter

logger = logging.getLogger('wfdiffusion')

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_PRECONDITION = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64
EXIT_IO = 74


def init_logging():
    logging.basicConfig(format='%(message)s')


class UsageArgumentParser(ArgumentParser):
    """
    Argument parser exiting with the usage error code on bad command lines.
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')


def add_jobs_argument(parser):
    parser.add_argument('-j', '--jobs', metavar='NUM', type=int, default=os.cpu_count(),
                        help='parallelization level (default: number of cpu cores (%(default)d)).')


report_formats = {
    'json': {'writer_classes': [JsonReportWriter]},
    'csv': {'writer_classes': [CsvReportWriter]},
    'both': {'writer_classes': [JsonReportWriter, CsvReportWriter]},
}


def add_config_arguments(parser):
    parser.add_argument('--config', metavar='FILE',
                        help='configuration file of key=value lines (default: built-in defaults only).')
    parser.add_argument('-D', metavar='KEY=VAL', dest='options', default=[], action='append',
                        help='set/override a configuration key (may be given multiple times).')
    parser.add_argument('--seed', metavar='INT', type=int,
                        help='master seed of the random streams (overrides sim.master_seed).')
    parser.add_argument('-o', '--out', metavar='DIR',
                        help='directory to save the reports to (overrides output.dir).')
    parser.add_argument('--format', metavar='NAME', choices=sorted(report_formats.keys()),
                        help='format of the reports (choices: %(choices)s; overrides output.format).')


def process_config_arguments(args):
    """
    Resolve the run configuration into ``args.config`` and the report writers
    into ``args.writers``. Command line flags take precedence over ``-D``
    assignments, which take precedence over the configuration file.
    """
    overrides = list(args.options)
    if args.seed is not None:
        overrides.append(f'sim.master_seed={args.seed}')
    if args.out is not None:
        overrides.append(f'output.dir={args.out}')
    if args.format is not None:
        overrides.append(f'output.format={args.format}')
    args.config = load_config(args.config, overrides)
    args.writers = [writer_class() for writer_class in report_formats[args.config.output.format]['writer_classes']]


def report_document(config, tag, payload):
    """
    Wrap a report payload with the data needed to reproduce it: the tool
    version, the master seed, the resolved configuration (without the output
    location and format) and the bound tag.
    """
    return {
        'version': __version__,
        'master_seed': config.master_seed,
        'bound_tag': tag,
        **payload,
        'config': config.as_dict(include_output=False),
    }


def save_document(args, document, name):
    os.makedirs(args.config.output.dir, exist_ok=True)
    return [writer.save(document, args.config.output.dir, name) for writer in args.writers]
