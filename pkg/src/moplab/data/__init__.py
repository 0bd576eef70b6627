# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Reading and writing interchange documents."""


# type annotations
from __future__ import annotations
from typing import Any, Optional

# standard libs
import sys
import json

# internal libs
from moplab.core.logging import Logger
from moplab.core.exceptions import InputError
from moplab.matcore import ComplexMatrix, decode_matrix
from moplab.channels import Channel, BipartiteBlockState
from moplab.data.model import (to_json_type, from_json_type, encode_value, decode_value,
                               encode_channel, decode_channel, encode_state, decode_state,
                               encode_vector, decode_vector)

# public interface
__all__ = ['load_document', 'dump_document', 'load_matrix', 'load_channel', 'load_state',
           'to_json_type', 'from_json_type', 'encode_value', 'decode_value',
           'encode_channel', 'decode_channel', 'encode_state', 'decode_state',
           'encode_vector', 'decode_vector', ]

# initialize logger
log = Logger.with_name(__name__)


def load_document(filepath: str) -> Any:
    """Parse a JSON document from `filepath` ('-' reads standard input)."""
    try:
        if filepath == '-':
            return json.load(sys.stdin)
        with open(filepath, mode='r') as stream:
            return json.load(stream)
    except json.JSONDecodeError as error:
        raise InputError(f'Could not parse document ({filepath}): {error}') from error


def dump_document(document: Any, filepath: str = '-', indent: Optional[int] = 4) -> None:
    """Write `document` as JSON to `filepath` ('-' writes standard output)."""
    if filepath == '-':
        print(json.dumps(document, indent=indent), file=sys.stdout)
        return
    with open(filepath, mode='w') as stream:
        json.dump(document, stream, indent=indent)
        stream.write('\n')
    log.debug(f'Wrote {filepath}')


def load_matrix(filepath: str) -> ComplexMatrix:
    document = load_document(filepath)
    if not isinstance(document, dict):
        raise InputError(f'Expected matrix document ({filepath})')
    return decode_matrix(document, name=filepath)


def load_channel(filepath: str, d_in: Optional[int] = None) -> Channel:
    document = load_document(filepath)
    if not isinstance(document, dict):
        raise InputError(f'Expected channel document ({filepath})')
    return decode_channel(document, d_in=d_in)


def load_state(filepath: str) -> BipartiteBlockState:
    document = load_document(filepath)
    if not isinstance(document, dict):
        raise InputError(f'Expected state document ({filepath})')
    return decode_state(document)
