# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Output formats shared by all commands (normal, table, json, csv)."""


# type annotations
from __future__ import annotations
from typing import List, Dict, Any, IO, Optional, Final

# standard libs
import sys
import csv
import json
import contextlib

# external libs
from rich.console import Console
from rich.syntax import Syntax
from rich.table import Table
from cmdkit.cli import ArgumentError

# internal libs
from moplab.core.config import config, config_hash
from moplab.data.model import to_json_type

# public interface
__all__ = ['OUTPUT_FORMATS', 'format_value', 'print_records', 'print_document', 'open_output', 'run_document', ]


OUTPUT_FORMATS: Final[List[str]] = ['normal', 'table', 'json', 'csv']


def format_value(value: Any) -> str:
    """Text form of a JSON-compatible value (strings unquoted, floats at full precision)."""
    value = to_json_type(value)
    return value if isinstance(value, str) else json.dumps(value)


@contextlib.contextmanager
def open_output(filepath: Optional[str]) -> IO:
    """Yield standard output for None or '-', else the opened file."""
    if filepath in (None, '-'):
        yield sys.stdout
    else:
        with open(filepath, mode='w', newline='') as stream:
            yield stream


def run_document(rows: List[Dict[str, Any]], **metadata: Any) -> Dict[str, Any]:
    """Structured-text document for a run with provenance."""
    from moplab import __version__
    return {'version': __version__, 'config_hash': config_hash(), **metadata,
            'rows': [{key: to_json_type(value) for key, value in row.items()} for row in rows]}


def print_document(document: Any, stream: IO = None) -> None:
    """Print JSON (highlighted when writing to a terminal)."""
    stream = stream or sys.stdout
    text = json.dumps(document, indent=4, sort_keys=False)
    if stream is sys.stdout and sys.stdout.isatty():
        Console().print(Syntax(text, 'json', word_wrap=True, theme=config.console.theme,
                               background_color='default'))
    else:
        print(text, file=stream, flush=True)


def print_records(rows: List[Dict[str, Any]], fields: List[str], output_format: str = 'normal',
                  stream: IO = None, **metadata: Any) -> None:
    """Print `rows` restricted to `fields` in the requested format."""
    stream = stream or sys.stdout
    if output_format == 'normal':
        _print_normal(rows, fields, stream)
    elif output_format == 'table':
        _print_table(rows, fields, stream)
    elif output_format == 'json':
        print_document(run_document([{name: row.get(name) for name in fields} for row in rows], **metadata),
                       stream)
    elif output_format == 'csv':
        _print_csv(rows, fields, stream)
    else:
        raise ArgumentError(f'Unknown output format \'{output_format}\' (choose from {", ".join(OUTPUT_FORMATS)})')


def _print_normal(rows: List[Dict[str, Any]], fields: List[str], stream: IO) -> None:
    width = max((len(name) for name in fields), default=0)
    for row in rows:
        print('---', file=stream)
        for name in fields:
            print(f'{name:>{width}}: {format_value(row.get(name))}', file=stream)


def _print_table(rows: List[Dict[str, Any]], fields: List[str], stream: IO) -> None:
    table = Table(title=None)
    for name in fields:
        table.add_column(name)
    for row in rows:
        table.add_row(*[format_value(row.get(name)) for name in fields])
    Console(file=stream).print(table)


def _print_csv(rows: List[Dict[str, Any]], fields: List[str], stream: IO) -> None:
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(fields)
    for row in rows:
        writer.writerow([format_value(row.get(name)) for name in fields])
