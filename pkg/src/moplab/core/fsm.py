# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Small finite state machines for pool workers."""


# type annotations
from __future__ import annotations
from typing import Dict, Callable, Type

# standard libs
from enum import Enum
from abc import ABC

# internal libs
from moplab.core.logging import Logger

# public interface
__all__ = ['State', 'StateMachine', ]

# initialize logger
log = Logger.with_name(__name__)


class State(Enum):
    """Base for state enums; implementations define a terminal HALT member."""


class StateMachine(ABC):
    """
    Drive `actions` from the current `state` until HALT.

    Each action returns the next state. A pending `halt()` request takes
    effect before the next action runs, so an action in flight finishes.
    """

    state: State
    states: Type[State]
    actions: Dict[State, Callable[[], State]]

    steps: int = 0
    _halt_requested: bool = False

    @property
    def halted(self: StateMachine) -> bool:
        return self.state is self.states.HALT  # noqa: HALT defined by implementations

    def next(self: StateMachine) -> State:
        if self._halt_requested:
            return self.states.HALT  # noqa: HALT defined by implementations
        try:
            return self.actions[self.state]()
        except Exception:
            log.critical(f'{self.__class__.__name__} failed in {self.state} after {self.steps} steps')
            raise

    def run(self: StateMachine) -> State:
        """Step until halted and return the final state."""
        while not self.halted:
            self.state = self.next()
            self.steps += 1
        return self.state

    def halt(self: StateMachine) -> None:
        self._halt_requested = True
