# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""
Seeded sweeps, falsification search, and the counterexample table.

Every cell draws its inputs from its own seed stream, keyed by the sample
seed and the checker name, so results do not depend on the worker count
or on which other cells are part of the run.
"""


# type annotations
from __future__ import annotations
from typing import List, Dict, Tuple, Any, Optional, Sequence, Final

# standard libs
import os
import zlib
import json
import hashlib
import functools
from dataclasses import dataclass, field

# external libs
import numpy as np
from numpy.random import SeedSequence

# internal libs
from moplab.core.config import config, config_hash
from moplab.core.platform import default_path
from moplab.core.logging import Logger
from moplab.core.exceptions import InputError, NoRootFound, EXIT_CLEAN, EXIT_VIOLATION
from moplab.matcore import check_order
from moplab.mop import MopOptions
from moplab.report import CheckReport, SKIPPED
from moplab.data import load_document, dump_document, decode_value, to_json_type, from_json_type
from moplab.inequalities import CounterexampleFamily, check_chris0, get_checker
from moplab.harness.pool import run_pool

# public interface
__all__ = ['ExperimentConfig', 'Cell', 'CellResult', 'SearchOutcome', 'SWEEP_FIELDS', 'COUNTEREXAMPLE_FIELDS',
           'cell_seed', 'build_cells', 'evaluate_cell', 'run_sweep', 'run_search', 'run_counterexample',
           'witness_threshold', 'write_witness', 'load_witness', 'replay_witness', ]

# initialize logger
log = Logger.with_name(__name__)


SWEEP_FIELDS: Final[List[str]] = ['name', 'seed', 'q', 'lhs', 'rhs', 'gap', 'holds']
COUNTEREXAMPLE_FIELDS: Final[List[str]] = ['b', 'p0', 'q', 'two_q', 'lhs', 'rhs', 'gap', 'holds', 'error']

SEARCH_CHECKERS: Final[Dict[Tuple[str, bool], str]] = {
    ('chris0', False): 'chris0',
    ('chris0', True): 'chris0-eb',
    ('case3', False): 'case3',
    ('case3', True): 'case3-eb',
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines the output of a run."""

    command: str = 'sweep'
    checkers: Tuple[str, ...] = ()
    qs: Tuple[float, ...] = (2.0, )
    seed: int = 0
    samples: int = 1
    dim: int = 2
    tol: Optional[float] = None
    witness_tol: Optional[float] = None
    threads: int = 1
    options: MopOptions = field(default_factory=MopOptions.from_config)
    mode: str = 'chris0'
    family: bool = False
    family_b: Tuple[float, ...] = (0.5, )
    eb_only: bool = False
    witness_dir: Optional[str] = None

    def __post_init__(self: ExperimentConfig) -> None:
        if self.samples < 0:
            raise InputError(f'Sample count must be non-negative (given {self.samples})')
        if self.dim < 1:
            raise InputError(f'Dimension must be positive (given {self.dim})')
        for q in self.qs:
            check_order(q)

    @property
    def seeds(self: ExperimentConfig) -> List[int]:
        return list(range(self.seed, self.seed + self.samples))


@dataclass(frozen=True)
class Cell:
    """One (checker, q, seed) evaluation; family cells carry `b` instead of a seed."""

    index: int
    checker: str
    q: float
    seed: Optional[int] = None
    b: Optional[float] = None


@dataclass(eq=False)
class CellResult:
    cell: Cell
    report: CheckReport

    def to_row(self: CellResult) -> Dict[str, Any]:
        skipped = self.report.status == SKIPPED
        return {
            'name': self.report.name if self.cell.b is None else f'{self.report.name}[b={self.cell.b:g}]',
            'seed': self.cell.seed,
            'q': self.cell.q,
            'lhs': self.report.lhs,
            'rhs': self.report.rhs,
            'gap': self.report.gap,
            'holds': 'skipped' if skipped else self.report.holds,
        }


def cell_seed(seed: int, checker: str) -> SeedSequence:
    """Seed stream of one sample: a pure function of the sample seed and the checker name."""
    return SeedSequence([int(seed), zlib.crc32(checker.encode())])


def build_cells(checkers: Sequence[str], qs: Sequence[float], seeds: Sequence[int]) -> List[Cell]:
    """Cross product in (checker, q, seed) order."""
    for name in checkers:
        get_checker(name)
    cells = []
    for name in checkers:
        for q in qs:
            for seed in seeds:
                cells.append(Cell(index=len(cells), checker=name, q=q, seed=seed))
    return cells


def evaluate_cell(cell: Cell, experiment: ExperimentConfig) -> CellResult:
    """Sample inputs for `cell` and run its checker."""
    if cell.b is not None:
        return CellResult(cell, _evaluate_family(cell, experiment))
    checker = get_checker(cell.checker)
    rng = np.random.default_rng(cell_seed(cell.seed, cell.checker))
    report = checker.sample(rng, cell.q, d=experiment.dim, opts=experiment.options, tol=experiment.tol)
    report.params['seed'] = cell.seed
    return CellResult(cell, report)


def _evaluate_family(cell: Cell, experiment: ExperimentConfig) -> CheckReport:
    family = CounterexampleFamily(cell.b)
    if cell.checker == 'case3-sqrt':
        return family.check(cell.q, tol=experiment.tol)
    report = check_chris0(family.channel, family.state, cell.q, opts=experiment.options, tol=experiment.tol)
    report.params['b'] = cell.b
    return report


def run_sweep(experiment: ExperimentConfig) -> List[CellResult]:
    """Evaluate every (checker, q, seed) cell; results in cell order."""
    cells = build_cells(experiment.checkers, experiment.qs, experiment.seeds)
    log.info(f'Sweeping {len(cells)} cells ({len(experiment.checkers)} checkers, {len(experiment.qs)} orders, '
             f'{experiment.samples} seeds) on {experiment.threads} threads')
    results = run_pool(cells, functools.partial(evaluate_cell, experiment=experiment), experiment.threads)
    failed = sum(1 for result in results if not result.report.holds)
    log.info(f'Sweep finished: {failed} of {len(results)} cells failed')
    return results


def witness_threshold(report: CheckReport, witness_tol: Optional[float] = None) -> bool:
    """True when the violation is large enough to be recorded as a witness."""
    witness_tol = float(config.check.witness_tol) if witness_tol is None else witness_tol
    return (report.status != SKIPPED and not report.holds
            and (report.gap < -witness_tol * report.scale or bool(report.failed_conditions)))


@dataclass(eq=False)
class SearchOutcome:
    results: List[CellResult]
    witnesses: List[str]

    @property
    def exit_status(self: SearchOutcome) -> int:
        return EXIT_VIOLATION if self.witnesses else EXIT_CLEAN


def run_search(experiment: ExperimentConfig) -> SearchOutcome:
    """
    Hunt for violations of the selected inequality.

    Random maps and states are drawn per seed; with `family` the diagonal
    counterexample family is added for each `family_b`. Every violation
    beyond the witness tolerance is written as a witness bundle.
    """
    try:
        checker = SEARCH_CHECKERS[(experiment.mode, experiment.eb_only)]
    except KeyError:
        raise InputError(f'Unknown search mode \'{experiment.mode}\' (choose chris0 or case3)') from None
    cells = build_cells([checker], experiment.qs, experiment.seeds)
    if experiment.family:
        name = 'case3-sqrt' if experiment.mode == 'case3' else 'chris0'
        for b in experiment.family_b:
            for q in experiment.qs:
                cells.append(Cell(index=len(cells), checker=name, q=q, b=b))
    log.info(f'Searching {len(cells)} cells (mode={experiment.mode}, eb_only={experiment.eb_only}, '
             f'family={experiment.family})')
    results = run_pool(cells, functools.partial(evaluate_cell, experiment=experiment), experiment.threads)
    witnesses = []
    for result in results:
        if witness_threshold(result.report, experiment.witness_tol):
            path = write_witness(result.report, result.cell.checker, result.cell.q, experiment.witness_dir)
            witnesses.append(path)
    if witnesses:
        log.warning(f'Found {len(witnesses)} violation witnesses')
    else:
        log.info(f'No violations in {len(results)} cells')
    return SearchOutcome(results, witnesses)


def run_counterexample(bs: Sequence[float], qs: Optional[Sequence[float]] = None,
                       tol: Optional[float] = None) -> List[Dict[str, Any]]:
    """
    Root p0 and the square-rooted phase-angle check for each b.

    Without explicit `qs`, three orders are evaluated per b: 2q = 2.05 and
    the window midpoint (both inside the violation window) and 2q = p0 + 1.
    A failed root search is reported on its row and the run continues.
    """
    rows = []
    for b in bs:
        family = CounterexampleFamily(float(b))
        try:
            p0 = family.p0
        except NoRootFound as error:
            log.warning(f'b={b:g}: {error}')
            rows.append({'b': b, 'p0': None, 'q': None, 'two_q': None, 'lhs': None, 'rhs': None,
                         'gap': None, 'holds': None, 'error': str(error)})
            continue
        orders = list(qs) if qs else [1.025, (2 + p0) / 4, (p0 + 1) / 2]
        for q in orders:
            report = family.check(q, tol=tol)
            rows.append({'b': b, 'p0': p0, 'q': q, 'two_q': 2 * q, 'lhs': report.lhs, 'rhs': report.rhs,
                         'gap': report.gap, 'holds': report.holds, 'error': None})
    return rows


def write_witness(report: CheckReport, checker: str, q: float, directory: Optional[str] = None) -> str:
    """Write a self-contained witness bundle and return its path."""
    from moplab import __version__
    directory = directory or os.path.join(default_path.lib, 'witness')
    os.makedirs(directory, exist_ok=True)
    inputs = report.witness or {}
    digest = hashlib.sha256(json.dumps([checker, to_json_type(q), inputs], sort_keys=True).encode()).hexdigest()
    path = os.path.join(directory, f'witness-{checker}-{digest[:12]}.json')
    report.witness_path = path
    bundle = {
        'kind': 'witness',
        'checker': checker,
        'q': to_json_type(q),
        'inputs': inputs,
        'report': report.to_json(),
        'version': __version__,
        'config_hash': config_hash(),
    }
    dump_document(bundle, path)
    log.info(f'Wrote witness ({path})')
    return path


def load_witness(path: str) -> Dict[str, Any]:
    bundle = load_document(path)
    if not isinstance(bundle, dict) or bundle.get('kind') != 'witness':
        raise InputError(f'Not a witness bundle ({path})')
    for key in ('checker', 'q', 'inputs'):
        if key not in bundle:
            raise InputError(f'Witness bundle missing \'{key}\' ({path})')
    return bundle


def replay_witness(path: str, opts: Optional[MopOptions] = None) -> CheckReport:
    """Reload a witness bundle and re-run its checker on the recorded inputs."""
    bundle = load_witness(path)
    checker = get_checker(bundle['checker'])
    inputs = {key: decode_value(value) for key, value in bundle['inputs'].items()}
    tol = bundle.get('report', {}).get('tol')
    report = checker.run(inputs, from_json_type(bundle['q']), opts=opts or MopOptions.from_config(),
                         tol=None if tol is None else float(from_json_type(tol)))
    recorded = bundle.get('report', {}).get('gap')
    if recorded is not None:
        log.info(f'Replayed {bundle["checker"]}: gap {report.gap:.12g} (recorded {from_json_type(recorded)})')
    return report
