# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Structured outcome of an inequality check."""


# type annotations
from __future__ import annotations
from typing import List, Dict, Any, Type, Optional

# standard libs
import math
import json
from dataclasses import dataclass, field, asdict

# internal libs
from moplab.core.config import config
from moplab.core.logging import Logger
from moplab.core.types import JSONValue
from moplab.data.model import to_json_type, from_json_type, encode_value

# public interface
__all__ = ['CheckReport', 'CHECKED', 'SKIPPED', ]

# initialize logger
log = Logger.with_name(__name__)


CHECKED: str = 'checked'
SKIPPED: str = 'skipped'


def _to_json_tree(value: Any) -> JSONValue:
    if isinstance(value, dict):
        return {str(key): _to_json_tree(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_json_tree(item) for item in value]
    return to_json_type(value)


def _from_json_tree(value: JSONValue) -> Any:
    if isinstance(value, dict):
        return {key: _from_json_tree(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_from_json_tree(item) for item in value]
    return from_json_type(value)


@dataclass(eq=False)
class CheckReport:
    """
    Compared sides of an inequality lhs <= rhs.

    The check holds when gap = rhs - lhs >= -tol * (1 + |rhs|) and every
    named side condition holds. A witness (the encoded inputs) is attached
    exactly when the check fails. Skipped reports always hold.
    """

    name: str
    lhs: float
    rhs: float
    tol: float
    params: Dict[str, Any] = field(default_factory=dict)
    conditions: Dict[str, bool] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    witness: Optional[Dict[str, Any]] = None
    witness_path: Optional[str] = None
    status: str = CHECKED

    @property
    def gap(self: CheckReport) -> float:
        return self.rhs - self.lhs

    @property
    def scale(self: CheckReport) -> float:
        return 1 + abs(self.rhs)

    @property
    def holds(self: CheckReport) -> bool:
        if self.status == SKIPPED:
            return True
        return self.gap >= -self.tol * self.scale and all(self.conditions.values())

    @property
    def failed_conditions(self: CheckReport) -> List[str]:
        return [name for name, passed in self.conditions.items() if not passed]

    @classmethod
    def build(cls: Type[CheckReport], name: str, lhs: float, rhs: float, tol: Optional[float] = None,
              params: Dict[str, Any] = None, inputs: Dict[str, Any] = None,
              conditions: Dict[str, bool] = None, notes: List[str] = None) -> CheckReport:
        """Assemble a report and attach encoded `inputs` as the witness if it fails."""
        tol = float(config.check.tol) if tol is None else tol
        report = cls(name=name, lhs=float(lhs), rhs=float(rhs), tol=tol, params=dict(params or {}),
                     conditions={key: bool(value) for key, value in (conditions or {}).items()},
                     notes=list(notes or []))
        if not report.holds:
            report.witness = {key: encode_value(value) for key, value in (inputs or {}).items()}
            failed = ', '.join(report.failed_conditions)
            log.warning(f'{name} violated: lhs={report.lhs:.12g} rhs={report.rhs:.12g} gap={report.gap:.3e}'
                        + (f' (failed: {failed})' if failed else ''))
        else:
            log.trace(f'{name} holds: gap={report.gap:.3e}')
        return report

    @classmethod
    def skipped(cls: Type[CheckReport], name: str, reason: str, params: Dict[str, Any] = None) -> CheckReport:
        """Report for a check that could not be attempted (its precondition is unknown or unmet)."""
        log.info(f'{name} skipped: {reason}')
        return cls(name=name, lhs=math.nan, rhs=math.nan, tol=math.nan, params=dict(params or {}),
                   notes=[reason], status=SKIPPED)

    def with_tol(self: CheckReport, tol: float) -> CheckReport:
        """Same comparison judged at a different tolerance."""
        data = self.to_dict()
        data['tol'] = tol
        return self.from_dict(data)

    def to_dict(self: CheckReport) -> Dict[str, Any]:
        return asdict(self)

    def to_json(self: CheckReport) -> Dict[str, JSONValue]:
        """Convert to JSON-serializable dictionary (gap and holds included)."""
        data = _to_json_tree(self.to_dict())
        data['gap'] = to_json_type(self.gap)
        data['holds'] = self.holds
        return data

    def pack(self: CheckReport) -> bytes:
        return json.dumps(self.to_json()).encode()

    @classmethod
    def from_dict(cls: Type[CheckReport], data: Dict[str, Any]) -> CheckReport:
        fields = {'name', 'lhs', 'rhs', 'tol', 'params', 'conditions', 'notes',
                  'witness', 'witness_path', 'status'}
        return cls(**{key: value for key, value in data.items() if key in fields})

    @classmethod
    def from_json(cls: Type[CheckReport], data: Dict[str, JSONValue]) -> CheckReport:
        """Build from JSON data (derived fields gap and holds are recomputed)."""
        data = dict(data)
        witness = data.pop('witness', None)
        report = cls.from_dict(_from_json_tree(data))
        report.witness = witness
        return report

    @classmethod
    def unpack(cls: Type[CheckReport], data: bytes) -> CheckReport:
        return cls.from_json(json.loads(data.decode()))
