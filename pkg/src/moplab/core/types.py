# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Typed parsing of command-line values."""


# type annotations
from typing import TypeVar, List, Union, Final, Tuple

# public interface
__all__ = ['JSONValue', 'smart_coerce', 'parse_order', 'parse_float_list', 'INFINITY_NAMES', ]


JSONValue = TypeVar('JSONValue', bool, int, float, str, type(None))

INFINITY_NAMES: Final[Tuple[str, ...]] = ('inf', 'infinity', 'oo')


def smart_coerce(value: str) -> JSONValue:
    """Interpret a configuration value typed on the command line."""
    text = value.strip().lower()
    if text in ('null', 'none'):
        return None
    if text in ('true', 'false'):
        return text == 'true'
    for kind in (int, float):
        try:
            return kind(value)
        except ValueError:
            continue
    return value


def parse_order(value: str) -> float:
    """A Schatten order; any of `INFINITY_NAMES` selects the operator norm."""
    text = value.strip().lower()
    return float('inf') if text in INFINITY_NAMES else float(text)


def parse_float_list(value: Union[str, List[str]]) -> List[float]:
    """Comma-separated orders or parameters, e.g. '1,1.5,2,inf'."""
    items = value if isinstance(value, list) else value.split(',')
    return [parse_order(part) for item in items for part in item.split(',') if part.strip()]
