# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Platform specific file paths and initialization."""


# standard libs
import os
import sys
import platform

# external libs
from cmdkit.config import Namespace
from cmdkit.ansi import bold, magenta

# public interface
__all__ = ['cwd', 'home', 'site', 'path', 'default_path', 'ensure_site_dirs']


# NOTE: operational failures exit with status 1 (see moplab.core.exceptions)
_EXIT_ERROR = 1


cwd = os.getcwd()
home = os.path.expanduser('~')
if 'MOPLAB_SITE' not in os.environ:
    local_site = os.path.join(cwd, '.moplab')
else:
    local_site = os.getenv('MOPLAB_SITE')
    if not os.path.isdir(local_site):
        print(f'{bold(magenta("CRITICAL"))} [{__name__}] '
              f'Directory does not exist (MOPLAB_SITE={local_site})', file=sys.stderr)
        sys.exit(_EXIT_ERROR)


def _site_layout(lib: str, log: str, config: str) -> dict:
    return {'lib': lib, 'log': log, 'config': config}


if platform.system() == 'Windows':
    site = Namespace(system=os.path.join(os.getenv('ProgramData', 'C:\\ProgramData'), 'MopLab'),
                     user=os.path.join(os.getenv('AppData', home), 'MopLab'),
                     local=local_site)
    path = Namespace({
        name: _site_layout(os.path.join(site[name], 'Library'),
                           os.path.join(site[name], 'Logs'),
                           os.path.join(site[name], 'Config.toml'))
        for name in ('system', 'user', 'local')
    })

elif platform.system() == 'Darwin':
    site = Namespace(system='/', user=home, local=local_site)
    path = Namespace({
        'system': _site_layout(os.path.join('/', 'Library', 'MopLab'),
                               os.path.join('/', 'Library', 'Logs', 'MopLab'),
                               os.path.join('/', 'Library', 'Preferences', 'MopLab', 'config.toml')),
        'user': _site_layout(os.path.join(home, 'Library', 'MopLab'),
                             os.path.join(home, 'Library', 'Logs', 'MopLab'),
                             os.path.join(home, 'Library', 'Preferences', 'MopLab', 'config.toml')),
        'local': _site_layout(os.path.join(local_site, 'Library'),
                              os.path.join(local_site, 'Logs'),
                              os.path.join(local_site, 'config.toml')),
    })

elif os.name == 'posix':
    site = Namespace(system='/', user=os.path.join(home, '.moplab'), local=local_site)
    path = Namespace({
        'system': _site_layout(os.path.join('/', 'var', 'lib', 'moplab'),
                               os.path.join('/', 'var', 'log', 'moplab'),
                               os.path.join('/', 'etc', 'moplab.toml')),
        'user': _site_layout(os.path.join(site.user, 'lib'),
                             os.path.join(site.user, 'log'),
                             os.path.join(site.user, 'config.toml')),
        'local': _site_layout(os.path.join(site.local, 'lib'),
                              os.path.join(site.local, 'log'),
                              os.path.join(site.local, 'config.toml')),
    })

else:
    print(f'{bold(magenta("CRITICAL"))} [{__name__}] '
          f'Platform unrecognized ({platform.system()})', file=sys.stderr)
    sys.exit(_EXIT_ERROR)


# Tracebacks and witness bundles default to the user site unless MOPLAB_SITE is set
default_path = path.local if 'MOPLAB_SITE' in os.environ else path.user


def ensure_site_dirs() -> None:
    """Create default site directories if possible (silently skip when not permitted)."""
    for default_dir in (default_path.lib, default_path.log, os.path.join(default_path.lib, 'witness')):
        try:
            os.makedirs(default_dir, exist_ok=True)
        except PermissionError:
            pass
