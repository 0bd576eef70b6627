# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Structured-text documents for matrices, maps, and states."""


# type annotations
from __future__ import annotations
from typing import Dict, Any, Optional

# standard libs
import math

# external libs
import numpy as np

# internal libs
from moplab.core.logging import Logger
from moplab.core.types import JSONValue
from moplab.core.exceptions import InputError
from moplab.matcore import encode_matrix, decode_matrix
from moplab.channels import Channel, KrausSet, BipartiteBlockState, choi_from_kraus

# public interface
__all__ = ['to_json_type', 'from_json_type', 'encode_value', 'decode_value',
           'encode_channel', 'decode_channel', 'encode_state', 'decode_state',
           'encode_vector', 'decode_vector', ]

# initialize logger
log = Logger.with_name(__name__)


def to_json_type(value: Any) -> JSONValue:
    """Convert scalar `value` to a representation valid in strict JSON."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        if math.isnan(value):
            return 'nan'
        return value
    return value


def from_json_type(value: JSONValue) -> Any:
    """Inverse of `to_json_type` for the special floating-point labels."""
    if isinstance(value, str) and value in ('inf', '-inf', 'nan'):
        return float(value)
    return value


def encode_vector(psi) -> Dict[str, Any]:
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    return {'kind': 'vector', 'size': int(psi.size),
            'entries': [[float(z.real), float(z.imag)] for z in psi]}


def decode_vector(data: Dict[str, Any]) -> np.ndarray:
    try:
        return np.array([complex(float(re), float(im)) for re, im in data['entries']], dtype=np.complex128)
    except (KeyError, TypeError, ValueError) as error:
        raise InputError(f'Malformed vector document: {error}') from error


def encode_channel(ch: Channel) -> Dict[str, Any]:
    """Channel document: header with dimensions and flags, plus the Choi matrix."""
    return {
        'kind': 'channel',
        'd_in': ch.d_in,
        'd_out': ch.d_out,
        'cp': bool(ch.cp_flag),
        'tp': bool(ch.tp_flag),
        'label': ch.label,
        'choi': encode_matrix(ch.choi),
    }


def decode_channel(data: Dict[str, Any], d_in: Optional[int] = None) -> Channel:
    """
    Build a channel from a channel document, a Kraus-set document, or a bare Choi matrix.

    A bare matrix needs `d_in` (default 2).
    """
    kind = data.get('kind')
    if kind == 'channel':
        try:
            return Channel(int(data['d_in']), int(data['d_out']), decode_matrix(data['choi'], 'Choi matrix'),
                           label=data.get('label', ''))
        except KeyError as error:
            raise InputError(f'Channel document missing field {error}') from error
    if kind == 'kraus-set':
        return choi_from_kraus(decode_value(data))
    if kind in (None, 'matrix') and 'rows' in data:
        choi = decode_matrix(data, 'Choi matrix')
        d_in = d_in or 2
        if choi.shape[0] % d_in:
            raise InputError(f'Choi matrix of shape {choi.shape} incompatible with d_in={d_in}')
        return Channel(d_in, choi.shape[0] // d_in, choi)
    raise InputError(f'Expected channel document (found kind={kind!r})')


def encode_state(rho: BipartiteBlockState) -> Dict[str, Any]:
    return {
        'kind': 'bipartite-state',
        'd': rho.d,
        'B': encode_matrix(rho.B),
        'C': encode_matrix(rho.C),
        'D': encode_matrix(rho.D),
    }


def decode_state(data: Dict[str, Any]) -> BipartiteBlockState:
    """Bipartite state from its block document or a bare 2d x 2d matrix."""
    kind = data.get('kind')
    if kind == 'bipartite-state':
        try:
            return BipartiteBlockState(decode_matrix(data['B'], 'B'), decode_matrix(data['C'], 'C'),
                                       decode_matrix(data['D'], 'D'))
        except KeyError as error:
            raise InputError(f'State document missing block {error}') from error
    if kind in (None, 'matrix') and 'rows' in data:
        return BipartiteBlockState.from_matrix(decode_matrix(data, 'state'))
    raise InputError(f'Expected bipartite-state document (found kind={kind!r})')


def encode_value(value: Any) -> Any:
    """Recursively encode checker inputs (maps, states, matrices, lists, scalars)."""
    if isinstance(value, Channel):
        return encode_channel(value)
    if isinstance(value, BipartiteBlockState):
        return encode_state(value)
    if isinstance(value, KrausSet):
        return {'kind': 'kraus-set', 'elements': [encode_value(A) for A in value]}
    if isinstance(value, np.ndarray):
        if value.ndim == 1:
            return encode_vector(value)
        return {'kind': 'matrix', **encode_matrix(value)}
    if isinstance(value, (list, tuple)):
        return {'kind': 'list', 'items': [encode_value(item) for item in value]}
    if isinstance(value, dict):
        return {'kind': 'mapping', 'items': {str(key): encode_value(item) for key, item in value.items()}}
    if isinstance(value, (complex, np.complexfloating)):
        return {'kind': 'complex', 'value': [float(value.real), float(value.imag)]}
    return to_json_type(value)


def decode_value(data: Any) -> Any:
    """Inverse of `encode_value`."""
    if not isinstance(data, dict):
        return from_json_type(data)
    kind = data.get('kind')
    if kind == 'channel':
        return decode_channel(data)
    if kind == 'bipartite-state':
        return decode_state(data)
    if kind == 'kraus-set':
        return KrausSet(tuple(decode_value(item) for item in data['elements']))
    if kind == 'vector':
        return decode_vector(data)
    if kind == 'matrix' or (kind is None and 'rows' in data):
        return decode_matrix(data)
    if kind == 'list':
        return [decode_value(item) for item in data['items']]
    if kind == 'mapping':
        return {key: decode_value(item) for key, item in data['items'].items()}
    if kind == 'complex':
        re, im = data['value']
        return complex(re, im)
    return {key: decode_value(item) for key, item in data.items()}
