# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""
Runtime configuration for MopLab.

Defaults, the system, user and local TOML files, and MOPLAB_* environment
variables are merged depth-first in that order of precedence. Numerical
tolerances and optimizer settings live here so that a run is fully
described by its configuration digest (see `config_hash`).
"""


# type annotations
from __future__ import annotations
from typing import Dict, List, Optional, Callable, Final

# standard libs
import os
import sys
import json
import shutil
import hashlib
import logging
import functools
from datetime import datetime

# external libs
import tomlkit
from cmdkit.config import Namespace, Configuration, Environ, ConfigurationError

# internal libs
from moplab.core.platform import path
from moplab.core.exceptions import write_traceback, EXIT_ERROR

# public interface
__all__ = ['config', 'default', 'update', 'blame', 'load', 'reload', 'reload_local', 'load_file',
           'ConfigurationError', 'Namespace', 'DEFAULT_LOGGING_STYLE', 'LOGGING_STYLES', 'CONFIG_SCOPES',
           'NUMERICAL_SECTIONS', 'ACTIVE_CONFIG_VARS', 'ENV_PREFIX', 'dotted_keys', 'config_hash', 'get_threads', ]

# logging is configured by moplab.core.logging after this module loads
log = logging.getLogger(__name__)


ENV_PREFIX: Final[str] = 'MOPLAB'
CONFIG_SCOPES: Final[List[str]] = ['system', 'user', 'local']

# Sections that change numerical results (and therefore the digest)
NUMERICAL_SECTIONS: Final[List[str]] = ['numerics', 'mop', 'check', 'toeplitz', 'counterexample']


DEFAULT_LOGGING_STYLE: Final[str] = 'default'
LOGGING_STYLES: Final[Dict[str, Dict[str, str]]] = {
    'default': {
        'format': ('%(ansi_bold)s%(ansi_level)s%(levelname)8s%(ansi_reset)s '
                   '%(ansi_faint)s[%(relative_name)s]%(ansi_reset)s %(message)s'),
    },
    'system': {
        'format': '%(asctime)s.%(msecs)03d %(hostname)s %(levelname)8s [%(config_id)s] [%(name)s] %(message)s',
    },
    'detailed': {
        'format': ('%(ansi_faint)s%(asctime)s.%(msecs)03d +%(elapsed_hms)s [%(config_id)s]%(ansi_reset)s '
                   '%(ansi_level)s%(ansi_bold)s%(levelname)8s%(ansi_reset)s '
                   '%(ansi_faint)s[%(name)s]%(ansi_reset)s %(message)s'),
    },
}


default = Namespace({

    'logging': {
        'color': True,
        'level': 'warning',
        'datefmt': '%Y-%m-%d %H:%M:%S',
        'style': DEFAULT_LOGGING_STYLE,
        **LOGGING_STYLES.get(DEFAULT_LOGGING_STYLE),
    },

    'numerics': {
        'psd_tol': 1e-10,        # relative to 1 + maxabs(A)
        'hermitian_tol': 1e-12,  # relative to 1 + maxabs(A)
        'kraus_tol': 1e-10,      # relative to Tr(choi)
    },

    'mop': {
        'grid': [120, 240],      # Bloch sphere resolution in (theta, phi)
        'polish': 5,             # number of grid points refined by simplex search
        'restarts': 64,          # random pure starts when d_in > 2
        'tolerance': 1e-7,
        'max_dim': 8,            # cap on composite input dimension
        'seed': 0,
        'max_iter': 400,         # projected ascent iterations per restart
    },

    'check': {
        'tol': 1e-9,             # relative acceptance tolerance
        'witness_tol': 1e-8,     # relative violation size before a witness is recorded
        'theta_grid': 720,
        'theta_tol': 1e-10,
        'eb_tol': 1e-5,          # relative two-sided tolerance for EB multiplicativity
    },

    'toeplitz': {
        'tol': 1e-8,
        'normal_tol': 1e-9,
    },

    'counterexample': {
        'p_max': 64,
        'scan_step': 1e-3,
    },

    'threads': 1,

    'console': {
        'theme': 'monokai',
    },
})


def read_file(filepath: Optional[str]) -> Namespace:
    """Parse a TOML file; a missing (or unset) file contributes nothing."""
    if not filepath or not os.path.exists(filepath):
        return Namespace({})
    try:
        return Namespace.from_toml(filepath)
    except Exception as error:
        raise ConfigurationError(f'(from file: {filepath}) {error.__class__.__name__}: {error}') from error


@functools.lru_cache(maxsize=None)
def load_file(filepath: Optional[str]) -> Namespace:
    return read_file(filepath)


def read_env() -> Environ:
    """MOPLAB_* variables expanded into sections (MOPLAB_MOP_RESTARTS -> mop.restarts)."""
    return Environ(prefix=ENV_PREFIX).expand()


FileReader = Callable[[Optional[str]], Namespace]


def assemble(files: Dict[str, Optional[str]], reader: FileReader = load_file,
             env: Optional[Environ] = None, preload: Optional[Namespace] = None) -> Configuration:
    """Merge defaults, an optional preload, the scope files, and the environment."""
    layers = {'default': default}
    if preload is not None:
        layers['preload'] = preload
    for scope in CONFIG_SCOPES:
        layers[scope] = reader(files.get(scope))
    layers['env'] = env if env is not None else read_env()
    return Configuration(**layers)


def logging_preload(base: Configuration) -> Namespace:
    """Expand the selected `logging.style` into its format string."""
    style = base.logging.style
    label = blame(base, 'logging', 'style')
    if not isinstance(style, str):
        raise ConfigurationError(f'Expected string for `logging.style` ({label})')
    if style.lower() not in LOGGING_STYLES:
        raise ConfigurationError(f'Unrecognized `logging.style` \'{style}\' '
                                 f'(expected one of {", ".join(LOGGING_STYLES)}) ({label})')
    return Namespace({'logging': LOGGING_STYLES[style.lower()]})


def build(files: Dict[str, Optional[str]], reader: FileReader = load_file) -> Configuration:
    env = read_env()
    base = assemble(files, reader, env)
    return assemble(files, reader, env, preload=logging_preload(base))


def scope_files() -> Dict[str, Optional[str]]:
    return {scope: path[scope].config for scope in CONFIG_SCOPES}


def load() -> Configuration:
    """Configuration from all scopes (files cached)."""
    return build(scope_files())


def reload() -> Configuration:
    """Configuration from all scopes, re-reading every file."""
    return build(scope_files(), reader=read_file)


def reload_local(filepath: Optional[str] = None) -> Configuration:
    """Configuration from defaults, the environment, and a single file."""
    return build({'local': filepath}, reader=read_file)


def blame(base: Configuration, *varpath: str) -> Optional[str]:
    """Where the effective value of `varpath` came from (for error messages)."""
    source = base.which(*varpath)
    if not source:
        return None
    if source in CONFIG_SCOPES:
        return f'from: {path[source].config}'
    if source == 'env':
        return f'from: {ENV_PREFIX}_' + '_'.join(node.upper() for node in varpath)
    return f'from: <{source}>'


try:
    if (single_file := os.getenv(f'{ENV_PREFIX}_CONFIG_FILE')) is not None:
        path.local.config = single_file
        config = reload_local(single_file)
    else:
        config = load()
except Exception as error:
    write_traceback(error, module=__name__)
    sys.exit(EXIT_ERROR)


def dotted_keys(section: dict, prefix: str = '') -> List[str]:
    """Every leaf key as a dotted path (underscores inside names are kept)."""
    keys = []
    for name, value in section.items():
        key = f'{prefix}{name}'
        keys.extend(dotted_keys(value, f'{key}.') if isinstance(value, dict) else [key])
    return keys


ACTIVE_CONFIG_VARS: Final[List[str]] = dotted_keys(Namespace(config))


def get_threads(base: Configuration = None) -> int:
    """Worker pool size from `config.threads` (at least one)."""
    base = base if base is not None else config
    value = base.threads
    try:
        threads = int(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f'Expected integer for `threads`, given \'{value}\' ({blame(base, "threads")})')
    if threads < 1:
        raise ConfigurationError(f'Expected positive `threads`, given {threads} ({blame(base, "threads")})')
    return threads


def config_hash(base: Configuration = None) -> str:
    """Short digest of the numerical sections, recorded with every report for provenance."""
    base = base if base is not None else config
    sections = {name: dict(Namespace(base[name])) for name in NUMERICAL_SECTIONS}
    text = json.dumps(sections, sort_keys=True, default=str)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _backup(filepath: str) -> None:
    stamp = datetime.now().strftime('%Y%m%d-%H%M%S')
    target = os.path.join(os.path.dirname(filepath), f'.config.{stamp}.toml')
    shutil.copy2(filepath, target)
    log.debug(f'Created backup file ({target})')


def update(scope: str, partial: dict) -> None:
    """Merge `partial` into the `scope` file, keeping comments and a timestamped backup."""
    filepath = path[scope].config
    os.makedirs(os.path.dirname(filepath), exist_ok=True)
    if os.path.exists(filepath):
        _backup(filepath)
        with open(filepath, mode='r') as stream:
            document = tomlkit.parse(stream.read())
    else:
        document = tomlkit.document()
        document.add(tomlkit.comment(f'Created by moplab on {datetime.now():%Y-%m-%d %H:%M:%S}'))
        document.add(tomlkit.comment('Merged with defaults and MOPLAB_* environment variables'))
    _merge_into(document, partial)
    with open(filepath, mode='w') as stream:
        tomlkit.dump(document, stream)


def _merge_into(target: dict, partial: dict) -> dict:
    """Recursive `dict.update` that preserves tomlkit containers."""
    for key, value in partial.items():
        if isinstance(value, dict) and isinstance(target.get(key), dict):
            _merge_into(target[key], value)
        else:
            target[key] = value
    return target
