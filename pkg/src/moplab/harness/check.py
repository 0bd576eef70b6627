# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Run a single registered checker on sampled or recorded inputs."""


# type annotations
from __future__ import annotations
from typing import List, Optional

# external libs
from cmdkit.app import Application
from cmdkit.cli import Interface, ArgumentError

# internal libs
from moplab.core.config import get_threads
from moplab.core.logging import Logger
from moplab.core.exceptions import get_shared_exception_mapping, InputError, ViolationWitnessed
from moplab.core.types import parse_float_list
from moplab.report import CheckReport, SKIPPED
from moplab.inequalities import CHECKERS, get_checker
from moplab.mop import MopOptions
from moplab.data import load_document, decode_value
from moplab.harness.output import OUTPUT_FORMATS, print_records, print_document, run_document
from moplab.harness.experiment import ExperimentConfig, SWEEP_FIELDS, run_sweep, replay_witness

# public interface
__all__ = ['CheckApp', ]

# initialize logger
log = Logger.with_name(__name__)


PROGRAM = 'moplab check'
USAGE = f"""\
Usage:
  {PROGRAM} [-h] NAME [--q LIST] [--seed N] [--samples N] [--dim D] [--tol VALUE]
               [--in FILE] [--format FORMAT]
  {PROGRAM} --list
  Evaluate an inequality checker.\
"""

HELP = f"""\
{USAGE}

  Inputs are drawn from the checker's sampler, one draw per seed, unless
  --in names a witness bundle (replayed with its recorded order) or a
  document of checker inputs. Exits with status 2 if any evaluation fails.

Arguments:
  NAME                       Checker name (see --list).

Options:
  -q, --q          LIST      Comma-separated orders (default: 2).
  -s, --seed       N         First sample seed (default: 0).
  -n, --samples    N         Number of seeds (default: 1).
  -d, --dim        D         Block dimension of sampled inputs (default: 2).
      --tol        VALUE     Relative acceptance tolerance.
  -i, --in         FILE      Witness bundle or inputs document.
  -l, --list                 List available checkers and exit.
  -f, --format     FORMAT    Output format ({', '.join(OUTPUT_FORMATS)}).
  -h, --help                 Show this message and exit.\
"""


class CheckApp(Application):
    """Evaluate an inequality checker."""

    interface = Interface(PROGRAM, USAGE, HELP)

    name: Optional[str] = None
    interface.add_argument('name', nargs='?', default=None)

    orders: List[float] = [2.0]
    interface.add_argument('-q', '--q', type=parse_float_list, default=orders, dest='orders')

    seed: int = 0
    interface.add_argument('-s', '--seed', type=int, default=seed)

    samples: int = 1
    interface.add_argument('-n', '--samples', type=int, default=samples)

    dim: int = 2
    interface.add_argument('-d', '--dim', type=int, default=dim)

    tolerance: float = None
    interface.add_argument('--tol', type=float, default=None, dest='tolerance')

    filepath: str = None
    interface.add_argument('-i', '--in', default=None, dest='filepath')

    list_checkers: bool = False
    interface.add_argument('-l', '--list', action='store_true', dest='list_checkers')

    output_format: str = 'normal'
    interface.add_argument('-f', '--format', choices=OUTPUT_FORMATS, default=output_format, dest='output_format')

    exceptions = {
        **get_shared_exception_mapping(__name__)
    }

    def run(self: CheckApp) -> None:
        """Business logic for `check`."""
        if self.list_checkers:
            self.print_checkers()
            return
        if self.filepath is not None:
            reports = self.check_recorded()
        else:
            if self.name is None:
                raise ArgumentError('Missing checker name (see --list)')
            experiment = ExperimentConfig(command='check', checkers=(self.name, ), qs=tuple(self.orders),
                                          seed=self.seed, samples=self.samples, dim=self.dim,
                                          tol=self.tolerance, threads=get_threads())
            reports = [result.report for result in run_sweep(experiment)]
        self.print_reports(reports)
        failed = [report for report in reports if not report.holds]
        if failed:
            for report in failed:
                log.warning(f'{report.name} fails (gap {report.gap:.3e}, params {report.params})')
            raise ViolationWitnessed(f'{len(failed)} of {len(reports)} evaluations failed')

    def check_recorded(self: CheckApp) -> List[CheckReport]:
        """Replay a witness bundle or evaluate a document of explicit inputs."""
        document = load_document(self.filepath)
        if not isinstance(document, dict):
            raise InputError(f'Expected witness bundle or inputs document ({self.filepath})')
        if document.get('kind') == 'witness':
            return [replay_witness(self.filepath)]
        if self.name is None:
            raise ArgumentError('Missing checker name for inputs document')
        checker = get_checker(self.name)
        inputs = decode_value(document)
        options = MopOptions.from_config()
        return [checker.run(inputs, q, opts=options, tol=self.tolerance) for q in self.orders]

    def print_reports(self: CheckApp, reports: List[CheckReport]) -> None:
        if self.output_format == 'json':
            print_document(run_document([report.to_json() for report in reports], command='check'))
            return
        rows = [{'name': report.name, 'seed': report.params.get('seed'), 'q': report.params.get('q'),
                 'lhs': report.lhs, 'rhs': report.rhs, 'gap': report.gap,
                 'holds': 'skipped' if report.status == SKIPPED else report.holds}
                for report in reports]
        print_records(rows, SWEEP_FIELDS, self.output_format)

    def print_checkers(self: CheckApp) -> None:
        rows = [{'name': checker.name,
                 'q_range': 'any' if not checker.uses_q else
                            f'>= {checker.min_q:g}' + ('' if checker.allows_inf else ', finite'),
                 'description': checker.description}
                for checker in CHECKERS.values()]
        print_records(rows, ['name', 'q_range', 'description'],
                      self.output_format if self.output_format != 'json' else 'table')
