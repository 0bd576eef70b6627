# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""
Evaluate independent cells on a pool of worker threads.

Each worker is a small state machine pulling cells from a shared inbound
queue and pushing results to an outbound queue. A single collector drains
the outbound queue and returns results sorted by cell index, so the output
never depends on the number of workers or their scheduling.
"""


# type annotations
from __future__ import annotations
from typing import List, Dict, Callable, Optional, TypeVar, Generic, Tuple

# standard libs
import functools
from enum import Enum
from queue import Queue, Empty as QueueEmpty

# internal libs
from moplab.core.logging import Logger
from moplab.core.fsm import State, StateMachine
from moplab.core.thread import Thread

# public interface
__all__ = ['WorkerState', 'CellWorker', 'WorkerThread', 'run_pool', ]

# initialize logger
log = Logger.with_name(__name__)


CellType = TypeVar('CellType')
ResultType = TypeVar('ResultType')


class WorkerState(State, Enum):
    """Finite states for a cell worker."""
    START = 0
    GET_CELL = 1
    EVALUATE = 2
    PUT_RESULT = 3
    FINAL = 4
    HALT = 5


class CellWorker(StateMachine, Generic[CellType, ResultType]):
    """Evaluate cells from the inbound queue until a sentinel (None) arrives."""

    id: int
    cell: Optional[Tuple[int, CellType]]
    result: Tuple[int, ResultType]

    inbound: Queue[Optional[Tuple[int, CellType]]]
    outbound: Queue[Tuple[int, ResultType]]
    evaluate: Callable[[CellType], ResultType]

    state = WorkerState.START
    states = WorkerState

    def __init__(self: CellWorker, id: int,
                 inbound: Queue[Optional[Tuple[int, CellType]]],
                 outbound: Queue[Tuple[int, ResultType]],
                 evaluate: Callable[[CellType], ResultType]) -> None:
        self.id = id
        self.inbound = inbound
        self.outbound = outbound
        self.evaluate = evaluate

    @functools.cached_property
    def actions(self: CellWorker) -> Dict[WorkerState, Callable[[], WorkerState]]:
        return {
            WorkerState.START: self.start,
            WorkerState.GET_CELL: self.get_cell,
            WorkerState.EVALUATE: self.evaluate_cell,
            WorkerState.PUT_RESULT: self.put_result,
            WorkerState.FINAL: self.finalize,
        }

    def start(self: CellWorker) -> WorkerState:
        log.trace(f'Started (worker-{self.id})')
        return WorkerState.GET_CELL

    def get_cell(self: CellWorker) -> WorkerState:
        """Get the next cell (None signals the end of the queue)."""
        try:
            self.cell = self.inbound.get(timeout=1)
            self.inbound.task_done()
            return WorkerState.EVALUATE if self.cell is not None else WorkerState.FINAL
        except QueueEmpty:
            return WorkerState.GET_CELL

    def evaluate_cell(self: CellWorker) -> WorkerState:
        index, cell = self.cell
        self.result = (index, self.evaluate(cell))
        return WorkerState.PUT_RESULT

    def put_result(self: CellWorker) -> WorkerState:
        self.outbound.put(self.result)
        return WorkerState.GET_CELL

    def finalize(self: CellWorker) -> WorkerState:
        log.trace(f'Done (worker-{self.id}, {self.steps} steps)')
        return WorkerState.HALT


class WorkerThread(Thread):
    """Run a cell worker within a dedicated thread."""

    def __init__(self: WorkerThread, id: int,
                 inbound: Queue, outbound: Queue, evaluate: Callable) -> None:
        super().__init__(name=f'moplab-worker-{id}')
        self.machine = CellWorker(id=id, inbound=inbound, outbound=outbound, evaluate=evaluate)

    def run_with_exceptions(self: WorkerThread) -> None:
        self.machine.run()

    def stop(self: WorkerThread) -> None:
        self.machine.halt()


def run_pool(cells: List[CellType], evaluate: Callable[[CellType], ResultType],
             threads: int = 1) -> List[ResultType]:
    """
    Evaluate `cells` and return the results in cell order.

    A single thread evaluates inline. Worker exceptions are re-raised
    when the pool is joined.
    """
    if threads <= 1 or len(cells) <= 1:
        return [evaluate(cell) for cell in cells]
    inbound: Queue = Queue()
    outbound: Queue = Queue()
    for index, cell in enumerate(cells):
        inbound.put((index, cell))
    workers = [WorkerThread.new(id=count, inbound=inbound, outbound=outbound, evaluate=evaluate)
               for count in range(1, min(threads, len(cells)) + 1)]
    for _ in workers:
        inbound.put(None)
    try:
        for worker in workers:
            worker.join()
    except Exception:
        for worker in workers:
            worker.stop()
        log.error(f'Pool stopped: {sum(worker.failed for worker in workers)} of {len(workers)} workers failed')
        raise
    collected = []
    while not outbound.empty():
        collected.append(outbound.get())
    log.debug(f'Collected {len(collected)} results from {len(workers)} workers')
    return [result for _, result in sorted(collected, key=lambda item: item[0])]
