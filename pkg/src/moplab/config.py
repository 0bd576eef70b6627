# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Inspect and edit MopLab settings."""


# type annotations
from __future__ import annotations
from typing import Any, Tuple, Final

# standard libs
import os
import sys
import json

# external libs
import toml
from pygments.styles import STYLE_MAP as CONSOLE_THEMES
from cmdkit.app import Application, ApplicationGroup
from cmdkit.cli import Interface, ArgumentError
from cmdkit.config import ConfigurationError, Namespace
from rich.console import Console
from rich.syntax import Syntax

# internal libs
from moplab.core.platform import path
from moplab.core.types import smart_coerce
from moplab.core.logging import Logger
from moplab.core.exceptions import get_shared_exception_mapping
from moplab.core.config import (load_file, update, config_hash, ACTIVE_CONFIG_VARS, ENV_PREFIX,
                                default as default_config, config as full_config)

# public interface
__all__ = ['ConfigApp', 'lookup', 'render', 'source_of', ]

# initialize logger
log = Logger.with_name(__name__)


# Top-level keys that are plain values rather than sections
TOP_LEVEL_KEYS: Final[Tuple[str, ...]] = ('threads', )


def source_of(scope: str = None) -> Tuple[str, Namespace]:
    """Label and settings for one scope (merged settings when `scope` is None)."""
    if scope is None:
        return 'configuration', full_config
    if scope == 'default':
        return 'default', default_config
    filepath = path[scope].config
    if not os.path.exists(filepath):
        raise ConfigurationError(f'No {scope} settings ({filepath} does not exist)')
    return filepath, load_file(filepath)


def lookup(settings: Namespace, key: str, label: str = 'configuration') -> Any:
    """Value at dotted `key` ('.' selects everything)."""
    if key == '.':
        return settings
    parts = key.split('.')
    if not all(parts):
        raise ConfigurationError(f'Malformed key "{key}"')
    node = settings
    for depth, part in enumerate(parts, start=1):
        if not isinstance(node, dict) or part not in node:
            raise ConfigurationError(f'"{".".join(parts[:depth])}" not found in {label}')
        node = node[part]
    return node


def render(value: Any, key: str) -> str:
    """Sections render as TOML, single values as JSON."""
    if not isinstance(value, dict):
        return json.dumps(value)
    document = value if key == '.' else {key: value}
    lines = toml.dumps(document).strip().splitlines()
    # toml quotes dotted table names
    return '\n'.join(line.replace('"', '') if line.startswith('[') else line for line in lines)


def add_scope_flags(interface: Interface, *scopes: str, default: str = None) -> None:
    """Mutually exclusive --<scope> flags storing into `scope`."""
    group = interface.add_mutually_exclusive_group()
    for scope in scopes:
        group.add_argument(f'--{scope}', action='store_const', const=scope, dest='scope',
                           **({'default': default} if scope == default else {}))


GET_PROGRAM = 'moplab config get'
GET_SYNOPSIS = f'{GET_PROGRAM} [-h] [KEY] [-r] [--system | --user | --local | --default]'
GET_USAGE = f"""\
Usage:
  {GET_SYNOPSIS}
  Print a setting or a whole section.\
"""

GET_HELP = f"""\
{GET_USAGE}

  Without a scope flag the effective (merged) settings are shown.
  See `moplab config which` for the scope a value comes from.

Arguments:
  KEY                       Dotted name, e.g., mop.restarts (default: '.').

Options:
      --system              Read the system file only.
      --user                Read the user file only.
      --local               Read the local file only.
      --default             Read the built-in defaults.
  -r, --raw                 Print plain text, never highlighted.
  -h, --help                Show this message and exit.\
"""


class ConfigGetApp(Application):
    """Print a setting or a whole section."""

    interface = Interface(GET_PROGRAM, GET_USAGE, GET_HELP)

    key: str = '.'
    interface.add_argument('key', nargs='?', default=key)

    scope: str = None
    add_scope_flags(interface, 'system', 'user', 'local', 'default')

    raw_mode: bool = False
    interface.add_argument('-r', '--raw', action='store_true', dest='raw_mode')

    # shell completion helpers (not listed in help)
    completion_interface = interface.add_mutually_exclusive_group()
    completion_interface.add_argument('--list-available', action='version', version=' '.join(ACTIVE_CONFIG_VARS))
    completion_interface.add_argument('--list-console-themes', action='version',
                                      version=' '.join(list(CONSOLE_THEMES)))

    exceptions = {
        **get_shared_exception_mapping(__name__)
    }

    def run(self: ConfigGetApp) -> None:
        """Print the selected value."""
        label, settings = source_of(self.scope)
        text = render(lookup(settings, self.key, label), self.key)
        if self.raw_mode or not sys.stdout.isatty():
            print(text.strip('"'), file=sys.stdout, flush=True)
            return
        Console().print(Syntax(text, 'toml', word_wrap=True, theme=full_config.console.theme,
                               background_color='default'))


SET_PROGRAM = 'moplab config set'
SET_SYNOPSIS = f'{SET_PROGRAM} [-h] KEY VALUE [--system | --user | --local]'
SET_USAGE = f"""\
Usage:
  {SET_SYNOPSIS}
  Write a setting to one scope file.\
"""

SET_HELP = f"""\
{SET_USAGE}

  Only keys present in the built-in defaults are accepted, and VALUE
  must match the type of the default (an integer is accepted where a
  real number is expected). The previous file is kept as a backup.

Arguments:
  KEY                     Dotted name, e.g., check.tol.
  VALUE                   New value.

Options:
      --user              Write to the user file (default).
      --system            Write to the system file.
      --local             Write to the local file.
  -h, --help              Show this message and exit.\
"""


class ConfigSetApp(Application):
    """Write a setting to one scope file."""

    interface = Interface(SET_PROGRAM, SET_USAGE, SET_HELP)

    key: str = None
    interface.add_argument('key', metavar='KEY')

    value: Any = None
    interface.add_argument('value', type=smart_coerce)

    scope: str = 'user'
    add_scope_flags(interface, 'user', 'system', 'local', default=scope)

    exceptions = {
        **get_shared_exception_mapping(__name__)
    }

    def run(self: ConfigSetApp) -> None:
        """Validate against the defaults and merge into the scope file."""
        if '.' not in self.key and self.key not in TOP_LEVEL_KEYS:
            raise ArgumentError(f'Expected SECTION.NAME for KEY, given "{self.key}"')
        self.value = coerce_like(lookup(default_config, self.key, 'default'), self.value, self.key)
        *sections, name = self.key.split('.')
        partial = {name: self.value}
        for section in reversed(sections):
            partial = {section: partial}
        update(self.scope, partial)
        log.debug(f'Set {self.key} = {self.value!r} ({path[self.scope].config})')


def coerce_like(reference: Any, value: Any, key: str) -> Any:
    """Check `value` against the type of `reference`; ints are promoted to float."""
    if isinstance(reference, dict):
        raise ArgumentError(f'"{key}" is a section, not a setting')
    if isinstance(reference, list):
        raise ArgumentError(f'"{key}" holds a list; edit the file directly')
    if isinstance(reference, float) and type(value) is int:
        return float(value)
    if type(reference) is not type(value):
        raise ArgumentError(f'Expected {type(reference).__name__} for "{key}", given {value!r}')
    return value


WHICH_PROGRAM = 'moplab config which'
WHICH_SYNOPSIS = f'{WHICH_PROGRAM} [-h] KEY [--site]'
WHICH_USAGE = f"""\
Usage:
  {WHICH_SYNOPSIS}
  Report which scope supplies a setting.\
"""

WHICH_HELP = f"""\
{WHICH_USAGE}

  Prints the effective value followed by its scope, the file or
  environment variable it was read from, and the built-in default.

Arguments:
  KEY                     Dotted name, e.g., toeplitz.tol.

Options:
      --site              Print the scope name alone.
  -h, --help              Show this message and exit.\
"""


class ConfigWhichApp(Application):
    """Report which scope supplies a setting."""

    interface = Interface(WHICH_PROGRAM, WHICH_USAGE, WHICH_HELP)

    key: str = None
    interface.add_argument('key', metavar='KEY')

    scope_only: bool = False
    interface.add_argument('--site', action='store_true', dest='scope_only')

    exceptions = {
        **get_shared_exception_mapping(__name__)
    }

    def run(self: ConfigWhichApp) -> None:
        """Print value and origin."""
        scope = self.find_scope()
        if self.scope_only:
            print(scope)
            return
        value, fallback = brief(full_config, self.key), brief(default_config, self.key)
        if scope in ('default', 'preload'):
            print(f'{value} (default)')
        elif scope == 'env':
            variable = f'{ENV_PREFIX}_' + self.key.upper().replace('.', '_')
            print(f'{value} (env: {variable} | default: {fallback})')
        else:
            print(f'{value} ({scope}: {path[scope].config} | default: {fallback})')

    def find_scope(self: ConfigWhichApp) -> str:
        try:
            scope = full_config.which(*self.key.split('.'))
        except KeyError:
            scope = None
        if scope is None:
            raise ConfigurationError(f'"{self.key}" not found')
        return scope


def brief(settings: Namespace, key: str) -> str:
    """One-word rendering of a value for `config which`."""
    try:
        value = lookup(settings, key)
    except ConfigurationError:
        return 'null'
    return '[...]' if isinstance(value, (dict, list)) else json.dumps(value)


HASH_PROGRAM = 'moplab config hash'
HASH_SYNOPSIS = f'{HASH_PROGRAM} [-h]'
HASH_USAGE = f"""\
Usage:
  {HASH_SYNOPSIS}
  Print the digest of the numerical settings.\
"""

HASH_HELP = f"""\
{HASH_USAGE}

  The digest covers the numerics, mop, check, toeplitz and counterexample
  sections and is recorded with every run document and witness bundle.

Options:
  -h, --help              Show this message and exit.\
"""


class ConfigHashApp(Application):
    """Print the digest of the numerical settings."""

    interface = Interface(HASH_PROGRAM, HASH_USAGE, HASH_HELP)
    ALLOW_NOARGS = True

    exceptions = {
        **get_shared_exception_mapping(__name__)
    }

    def run(self: ConfigHashApp) -> None:
        print(config_hash())


def describe_files() -> str:
    """Scope flags and the file each one refers to."""
    return '\n'.join(f'  --{scope:<15} {path[scope].config}' for scope in ('system', 'user', 'local'))


PROGRAM = 'moplab config'
USAGE = f"""\
Usage:
  {PROGRAM} [-h]
  {GET_SYNOPSIS}
  {SET_SYNOPSIS}
  {WHICH_SYNOPSIS}
  {HASH_SYNOPSIS}

  {__doc__}\
"""

HELP = f"""\
{USAGE}

Commands:
  get              {ConfigGetApp.__doc__}
  set              {ConfigSetApp.__doc__}
  which            {ConfigWhichApp.__doc__}
  hash             {ConfigHashApp.__doc__}

Options:
  -h, --help       Show this message and exit.

Files:
{describe_files()}
"""


class ConfigApp(ApplicationGroup):
    """Inspect and edit MopLab settings."""

    interface = Interface(PROGRAM, USAGE, HELP)

    interface.add_argument('command')

    command = None
    commands = {'get': ConfigGetApp,
                'set': ConfigSetApp,
                'which': ConfigWhichApp,
                'hash': ConfigHashApp, }
