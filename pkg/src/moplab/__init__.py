# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Initialization and entry-point for console application."""


# standard libs
import sys
from importlib.metadata import version as get_version

# external libs
from cmdkit.app import Application, ApplicationGroup
from cmdkit.cli import Interface

# internal libs
from moplab.core.logging import Logger, initialize_logging
from moplab.core.exceptions import resolve_exit_status
from moplab.harness import (NormApp, MopApp, CheckApp, CounterexampleApp, SweepApp, SearchApp,
                            DecomposeApp, ComplementApp)
from moplab.config import ConfigApp

# public interface
__all__ = ['MopLabApp', 'main', '__version__']

# project metadata
__version__     = get_version('moplab')
__description__ = 'Maximal output purity of completely positive qubit maps.'

# initialize logger
log = Logger.with_name('moplab')


# inject logger setup into command-line framework
Application.log_critical = log.critical
Application.log_exception = log.exception


APP_NAME = 'moplab'
APP_USAGE = f"""\
Usage:
  {APP_NAME} [-h] [-v] <command> [<args>...]
  {__description__}\
"""

APP_HELP = f"""\
{APP_USAGE}

Commands:
  norm                   {NormApp.__doc__}
  mop                    {MopApp.__doc__}
  check                  {CheckApp.__doc__}
  counterexample         {CounterexampleApp.__doc__}
  sweep                  {SweepApp.__doc__}
  search                 {SearchApp.__doc__}
  decompose              {DecomposeApp.__doc__}
  complement             {ComplementApp.__doc__}
  config                 {ConfigApp.__doc__}

Options:
  -h, --help             Show this message and exit.
  -v, --version          Show the version and exit.

Exit status:
  0                      Clean run (every evaluated inequality holds).
  1                      Operational error (bad input, numerical failure).
  2                      Violation witnessed.\
"""


class MopLabApp(ApplicationGroup):
    """Top-level application class for console application."""

    interface = Interface(APP_NAME, APP_USAGE, APP_HELP)
    interface.add_argument('-v', '--version', action='version', version=__version__)
    interface.add_argument('command')

    command = None
    commands = {
        'norm': NormApp,
        'mop': MopApp,
        'check': CheckApp,
        'counterexample': CounterexampleApp,
        'sweep': SweepApp,
        'search': SearchApp,
        'decompose': DecomposeApp,
        'complement': ComplementApp,
        'config': ConfigApp,
    }


def main() -> int:
    """Entry-point for console application."""
    initialize_logging()
    return resolve_exit_status(MopLabApp.main(sys.argv[1:]))
