# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Exception hierarchy, exit-status contract, and shared handlers for console applications."""


# type annotations
from __future__ import annotations
from typing import Dict, Union, Callable, Type, Final

# standard libraries
import os
import sys
import logging
import functools
import traceback
from datetime import datetime

# external libs
from cmdkit.app import exit_status
from cmdkit.config import Namespace
from cmdkit.config import ConfigurationError
from cmdkit.ansi import faint, bold, magenta, yellow, red, COLOR_STDERR

# internal libs
from moplab.core.platform import default_path

# public interface
__all__ = ['display_warning', 'display_error', 'display_critical', 'traceback_filepath', 'write_traceback',
           'handle_exception', 'handle_exception_silently', 'get_shared_exception_mapping',
           'EXIT_CLEAN', 'EXIT_ERROR', 'EXIT_VIOLATION', 'resolve_exit_status',
           'MoplabError', 'InputError', 'DimensionError', 'NotPositiveError', 'NotCompletelyPositive',
           'NotTracePreserving', 'DimensionCapExceeded', 'NoRootFound', 'SingularBlockError',
           'UnsupportedDecomposition', 'UnknownChecker', 'ViolationWitnessed', ]


# Exit-code contract for the console application
EXIT_CLEAN: Final[int] = 0
EXIT_ERROR: Final[int] = 1
EXIT_VIOLATION: Final[int] = 2

# cmdkit reserves small integers for its own outcomes (bad_argument == 2 among them),
# so violations travel through the application layer under a private code
_VIOLATION_SIGNAL: Final[int] = 100


def resolve_exit_status(status: int) -> int:
    """Collapse cmdkit exit codes onto the 0/1/2 contract."""
    if status == exit_status.success:
        return EXIT_CLEAN
    if status == _VIOLATION_SIGNAL:
        return EXIT_VIOLATION
    return EXIT_ERROR


class MoplabError(Exception):
    """Base class for all domain errors."""


class InputError(MoplabError, ValueError):
    """Non-finite entries, malformed shapes, or a structural precondition not met."""


class DimensionError(InputError):
    """Operand dimensions do not agree."""


class NotPositiveError(InputError):
    """A matrix required to be positive semidefinite has a significantly negative eigenvalue."""

    def __init__(self: NotPositiveError, message: str, eigenvalue: float) -> None:
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NotCompletelyPositive(InputError):
    """Operation requires a CP map (positive semidefinite Choi matrix)."""


class NotTracePreserving(InputError):
    """Operation requires a trace-preserving map."""


class DimensionCapExceeded(MoplabError):
    """Composite input dimension exceeds the configured optimizer cap."""


class NoRootFound(MoplabError):
    """Bracketing failed to find a sign change for the counterexample root equation."""


class SingularBlockError(MoplabError):
    """Diagonal block is singular within tolerance; regularize or reject."""

    def __init__(self: SingularBlockError, message: str, eigenvalue: float) -> None:
        super().__init__(message)
        self.eigenvalue = eigenvalue


class UnsupportedDecomposition(MoplabError):
    """Input lies outside the constructively supported regime."""


class UnknownChecker(MoplabError, KeyError):
    """No checker registered under the requested name."""

    def __str__(self: UnknownChecker) -> str:
        return str(self.args[0]) if self.args else ''


class ViolationWitnessed(Exception):
    """Raised by applications to exit with the violation status after reporting."""


def _display_message(levelname: str, error: Union[Exception, str],
                     module: str = None, colorized: Callable[[str], str] = None) -> None:
    """Generic message display for import-time warnings and errors."""
    text = error if isinstance(error, str) else f'{error.__class__.__name__}: {error}'
    if COLOR_STDERR:
        name = '' if not module else faint(f'[{module}]')
        level = levelname if colorized is None else bold(colorized(levelname))
    else:
        name = '' if not module else f'[{module}]'
        level = levelname
    print(f'{level} {name} {text}', file=sys.stderr)


display_warning = functools.partial(_display_message, 'WARNING', colorized=yellow)
display_error = functools.partial(_display_message, 'ERROR', colorized=red)
display_critical = functools.partial(_display_message, 'CRITICAL', colorized=magenta)


def traceback_filepath(path: Namespace = None) -> str:
    """Construct filepath for writing traceback."""
    path = path or default_path
    time = datetime.now().strftime('%Y%m%d-%H%M%S')
    return os.path.join(path.log, f'exception-{time}.log')


def write_traceback(exc: Exception, site: Namespace = None, logger: logging.Logger = None,
                    status: int = EXIT_ERROR, module: str = None) -> int:
    """Write exception to file and return exit code."""
    write = functools.partial(display_critical, module=module) if not logger else logger.critical
    path = traceback_filepath(site)
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, mode='w') as stream:
            print(traceback.format_exc(), file=stream)
    except OSError:
        write(f'{exc.__class__.__name__}: ' + str(exc).replace('\n', ' - '))
        write('Could not write traceback file')
        return status
    write(f'{exc.__class__.__name__}: ' + str(exc).replace('\n', ' - '))
    write(f'Exception traceback written to {path}')
    return status


def handle_exception(exc: Exception, logger: logging.Logger, status: int) -> int:
    """Log the exception argument and exit with `status`."""
    logger.critical(f'{exc.__class__.__name__}: ' + str(exc).replace('\n', ' - '))
    return status


def handle_exception_silently(exc: Exception) -> int:
    """Violations have already been reported; return the private violation code."""
    return _VIOLATION_SIGNAL


def get_shared_exception_mapping(modname: str = 'moplab') -> Dict[Type[Exception], Callable[[Exception], int]]:
    """Globally defined exception cases for all application subcommands."""
    logger = logging.getLogger(modname)
    return {
        ViolationWitnessed: handle_exception_silently,
        MoplabError: functools.partial(handle_exception, logger=logger, status=EXIT_ERROR),
        RuntimeError: functools.partial(handle_exception, logger=logger, status=EXIT_ERROR),
        FileNotFoundError: functools.partial(handle_exception, logger=logger, status=EXIT_ERROR),
        PermissionError: functools.partial(handle_exception, logger=logger, status=EXIT_ERROR),
        ConfigurationError: functools.partial(handle_exception, logger=logger, status=EXIT_ERROR),
        Exception: functools.partial(write_traceback, logger=logger, status=EXIT_ERROR),
    }
