# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Daemon threads that carry their failure back to the joining thread."""


# type annotations
from __future__ import annotations
from typing import Optional, Type

# standard libs
import threading
from abc import ABC, abstractmethod

# internal libs
from moplab.core.logging import Logger

# public interface
__all__ = ['Thread', ]

# initialize logger
log = Logger.with_name(__name__)


class Thread(threading.Thread, ABC):
    """A daemon thread whose exception is re-raised by `join`."""

    error: Optional[Exception] = None

    def __init__(self: Thread, name: str) -> None:
        super().__init__(name=name, daemon=True)

    @abstractmethod
    def run_with_exceptions(self: Thread) -> None:
        """Body of the thread; may raise."""

    def run(self: Thread) -> None:
        try:
            self.run_with_exceptions()
        except Exception as error:
            log.debug(f'{self.name} stopped with {error.__class__.__name__}: {error}')
            self.error = error

    @classmethod
    def new(cls: Type[Thread], *args, **kwargs) -> Thread:
        """Construct and start."""
        thread = cls(*args, **kwargs)
        thread.start()
        return thread

    @property
    def failed(self: Thread) -> bool:
        return self.error is not None

    def join(self: Thread, timeout: Optional[float] = None) -> None:
        super().join(timeout=timeout)
        if self.error is not None:
            raise self.error
