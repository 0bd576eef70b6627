# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""
Logging setup.

Library use installs only a NullHandler on the `moplab` logger; the console
application calls `initialize_logging` to attach the stderr handler. Every
record carries the configuration digest (`config_id`) so logs from different
runs can be matched to their settings.
"""


# type annotations
from __future__ import annotations
from typing import Dict, Any, Type, Final, NoReturn

# standard libraries
import sys
import socket
import logging
import functools

# external libs
from cmdkit.config import ConfigurationError
from cmdkit.ansi import Ansi, COLOR_STDERR

# internal libs
from moplab.core.config import config, blame, config_hash
from moplab.core.exceptions import write_traceback, EXIT_ERROR

# public interface
__all__ = ['Logger', 'HOSTNAME', 'TRACE', 'DEVEL', 'LEVELS', 'handler', 'level_from_name',
           'initialize_logging', ]


HOSTNAME: Final[str] = socket.gethostname()

TRACE: Final[int] = logging.DEBUG - 5
DEVEL: Final[int] = 1

LEVELS: Final[Dict[str, int]] = {
    'DEVEL': DEVEL,
    'TRACE': TRACE,
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR,
    'CRITICAL': logging.CRITICAL,
}

for _name in ('TRACE', 'DEVEL'):
    logging.addLevelName(LEVELS[_name], _name)

LEVEL_COLORS: Final[Dict[str, Ansi]] = {
    'DEVEL': Ansi.RED,
    'TRACE': Ansi.CYAN,
    'DEBUG': Ansi.BLUE,
    'INFO': Ansi.GREEN,
    'WARNING': Ansi.YELLOW,
    'ERROR': Ansi.RED,
    'CRITICAL': Ansi.MAGENTA,
}


class Logger(logging.Logger):
    """Logger with TRACE (optimizer internals) and DEVEL levels."""

    def trace(self: Logger, msg: str, *args, **kwargs) -> None:
        if self.isEnabledFor(TRACE):
            self._log(TRACE, msg, args, **kwargs)

    def devel(self: Logger, msg: str, *args, **kwargs) -> None:
        if self.isEnabledFor(DEVEL):
            self._log(DEVEL, msg, args, **kwargs)

    @classmethod
    def with_name(cls: Type[Logger], name: str) -> Logger:
        return logging.getLogger(name)  # noqa: logger class installed below


logging.setLoggerClass(Logger)


def format_elapsed(seconds: float) -> str:
    """Elapsed time as hh:mm:ss.sss."""
    minutes, seconds = divmod(seconds, 60)
    hours, minutes = divmod(int(minutes), 60)
    return f'{hours:02d}:{minutes:02d}:{seconds:06.3f}'


@functools.cache
def _config_id() -> str:
    return config_hash()[:8]


class LogRecord(logging.LogRecord):
    """Record with ANSI attributes, elapsed time, hostname, and configuration digest."""

    def __init__(self: LogRecord, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self.hostname = HOSTNAME
        self.config_id = _config_id()
        self.relative_name = self.name.split('.', 1)[-1]
        self.elapsed = self.relativeCreated / 1000
        self.elapsed_hms = format_elapsed(self.elapsed)
        color = COLOR_STDERR and config.logging.color
        self.ansi_level = LEVEL_COLORS.get(self.levelname, Ansi.NULL).value if color else ''
        for name in ('reset', 'bold', 'faint', 'italic'):
            setattr(self, f'ansi_{name}', getattr(Ansi, name.upper()).value if color else '')


logging.setLogRecordFactory(LogRecord)


def _fatal(error: Exception) -> NoReturn:
    write_traceback(error, module=__name__)
    sys.exit(EXIT_ERROR)


class StreamHandler(logging.StreamHandler):
    """Stream handler that treats a broken logging configuration as fatal."""

    def handleError(self: StreamHandler, record: logging.LogRecord) -> None:
        _fatal(sys.exc_info()[1])


def level_from_name(name: Any, source: str = 'logging.level') -> int:
    """Numeric level for a configured level name."""
    label = blame(config, *source.split('.'))
    if not isinstance(name, str):
        raise ConfigurationError(f'Expected string for logging level, given \'{name}\' ({label})')
    try:
        return LEVELS[name.upper()]
    except KeyError:
        raise ConfigurationError(f'Unsupported logging level \'{name}\' '
                                 f'(expected one of {", ".join(LEVELS).lower()}) ({label})') from None


try:
    level = level_from_name(config.logging.level)
    handler = StreamHandler(stream=sys.stderr)
    handler.setFormatter(logging.Formatter(config.logging.format, datefmt=config.logging.datefmt))
except Exception as error:
    _fatal(error)


logger = logging.getLogger('moplab')
logger.setLevel(level)
logger.addHandler(logging.NullHandler())


@functools.cache
def initialize_logging() -> None:
    """Attach the stderr handler (once)."""
    logger.addHandler(handler)
