# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Seeded sweeps, falsification search, and the counterexample table."""


# type annotations
from __future__ import annotations
from typing import List, Optional

# external libs
from cmdkit.app import Application
from cmdkit.cli import Interface

# internal libs
from moplab.core.config import get_threads
from moplab.core.logging import Logger
from moplab.core.exceptions import get_shared_exception_mapping, ViolationWitnessed
from moplab.core.types import parse_float_list
from moplab.harness.output import OUTPUT_FORMATS, print_records, open_output
from moplab.harness.experiment import (ExperimentConfig, SWEEP_FIELDS, COUNTEREXAMPLE_FIELDS,
                                       run_sweep, run_search, run_counterexample)

# public interface
__all__ = ['SweepApp', 'SearchApp', 'CounterexampleApp', ]

# initialize logger
log = Logger.with_name(__name__)


def parse_name_list(value: str) -> List[str]:
    return [name.strip() for name in value.split(',') if name.strip()]


SWEEP_PROGRAM = 'moplab sweep'
SWEEP_USAGE = f"""\
Usage:
  {SWEEP_PROGRAM} [-h] --checkers LIST [--q LIST] [--seed N] [--samples N] [--dim D]
               [--tol VALUE] [--threads N] [--out FILE] [--format FORMAT]
  Evaluate checkers over a grid of orders and seeds.\
"""

SWEEP_HELP = f"""\
{SWEEP_USAGE}

  Every (checker, q, seed) cell draws its inputs from a seed stream keyed
  by the sample seed and the checker name, so output does not depend on
  the number of threads. Rows are written in (checker, q, seed) order with
  the columns {', '.join(SWEEP_FIELDS)}.

Options:
  -c, --checkers   LIST      Comma-separated checker names.
  -q, --q          LIST      Comma-separated orders (default: 2).
  -s, --seed       N         First sample seed (default: 0).
  -n, --samples    N         Number of seeds (default: 1).
  -d, --dim        D         Block dimension of sampled inputs (default: 2).
      --tol        VALUE     Relative acceptance tolerance.
  -t, --threads    N         Worker threads (default: from configuration).
  -o, --out        FILE      Output path (default: stdout).
  -f, --format     FORMAT    Output format ({', '.join(OUTPUT_FORMATS)}, default: csv).
  -h, --help                 Show this message and exit.\
"""


class SweepApp(Application):
    """Evaluate checkers over a grid of orders and seeds."""

    interface = Interface(SWEEP_PROGRAM, SWEEP_USAGE, SWEEP_HELP)

    checkers: List[str] = None
    interface.add_argument('-c', '--checkers', type=parse_name_list, required=True)

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

    threads: int = None
    interface.add_argument('-t', '--threads', type=int, default=None)

    outpath: str = '-'
    interface.add_argument('-o', '--out', default=outpath, dest='outpath')

    output_format: str = 'csv'
    interface.add_argument('-f', '--format', choices=OUTPUT_FORMATS, default=output_format, dest='output_format')

    exceptions = {
        **get_shared_exception_mapping(__name__)
    }

    def run(self: SweepApp) -> None:
        """Business logic for `sweep`."""
        experiment = ExperimentConfig(command='sweep', checkers=tuple(self.checkers), qs=tuple(self.orders),
                                      seed=self.seed, samples=self.samples, dim=self.dim, tol=self.tolerance,
                                      threads=self.threads or get_threads())
        rows = [result.to_row() for result in run_sweep(experiment)]
        with open_output(self.outpath) as stream:
            print_records(rows, SWEEP_FIELDS, self.output_format, stream=stream, command='sweep',
                          seed=self.seed, samples=self.samples)


SEARCH_PROGRAM = 'moplab search'
SEARCH_USAGE = f"""\
Usage:
  {SEARCH_PROGRAM} [-h] [--mode MODE] [--family [--b LIST]] [--eb-only] [--q LIST] [--seed N]
                [--samples N] [--dim D] [--tol VALUE] [--threads N] [--out-dir DIR]
                [--out FILE] [--format FORMAT]
  Search for violations of the output-purity inequalities.\
"""

SEARCH_HELP = f"""\
{SEARCH_USAGE}

  Random completely positive maps and states are drawn per seed and checked
  against the selected inequality. Mode 'chris0' checks the bound by the
  maximal output purity; mode 'case3' checks the phase-angle bound. With
  --family the diagonal counterexample family is added for each b.

  Every violation is written as a witness bundle that `moplab check --in`
  replays. Exits with status 2 if any witness was written.

Options:
  -m, --mode       MODE      Inequality to search (chris0 or case3, default: chris0).
      --family               Include the diagonal counterexample family.
  -b, --b          LIST      Family parameters (default: 0.5).
      --eb-only              Sample entanglement-breaking maps only.
  -q, --q          LIST      Comma-separated orders (default: 1.25,1.5,2).
  -s, --seed       N         First sample seed (default: 0).
  -n, --samples    N         Number of seeds (default: 100).
  -d, --dim        D         Output dimension of sampled maps (default: 2).
      --tol        VALUE     Relative acceptance tolerance.
  -t, --threads    N         Worker threads (default: from configuration).
      --out-dir    DIR       Witness directory (default: site library).
  -o, --out        FILE      Output path for the summary (default: stdout).
  -f, --format     FORMAT    Output format ({', '.join(OUTPUT_FORMATS)}, default: normal).
  -h, --help                 Show this message and exit.\
"""


class SearchApp(Application):
    """Search for violations of the output-purity inequalities."""

    interface = Interface(SEARCH_PROGRAM, SEARCH_USAGE, SEARCH_HELP)

    mode: str = 'chris0'
    interface.add_argument('-m', '--mode', choices=['chris0', 'case3'], default=mode)

    family: bool = False
    interface.add_argument('--family', action='store_true')

    family_b: List[float] = [0.5]
    interface.add_argument('-b', '--b', type=parse_float_list, default=family_b, dest='family_b')

    eb_only: bool = False
    interface.add_argument('--eb-only', action='store_true', dest='eb_only')

    orders: List[float] = [1.25, 1.5, 2.0]
    interface.add_argument('-q', '--q', type=parse_float_list, default=orders, dest='orders')

    seed: int = 0
    interface.add_argument('-s', '--seed', type=int, default=seed)

    samples: int = 100
    interface.add_argument('-n', '--samples', type=int, default=samples)

    dim: int = 2
    interface.add_argument('-d', '--dim', type=int, default=dim)

    tolerance: float = None
    interface.add_argument('--tol', type=float, default=None, dest='tolerance')

    threads: int = None
    interface.add_argument('-t', '--threads', type=int, default=None)

    witness_dir: Optional[str] = None
    interface.add_argument('--out-dir', default=None, dest='witness_dir')

    outpath: str = '-'
    interface.add_argument('-o', '--out', default=outpath, dest='outpath')

    output_format: str = 'normal'
    interface.add_argument('-f', '--format', choices=OUTPUT_FORMATS, default=output_format, dest='output_format')

    exceptions = {
        **get_shared_exception_mapping(__name__)
    }

    def run(self: SearchApp) -> None:
        """Business logic for `search`."""
        experiment = ExperimentConfig(command='search', qs=tuple(self.orders), seed=self.seed,
                                      samples=self.samples, dim=self.dim, tol=self.tolerance,
                                      threads=self.threads or get_threads(), mode=self.mode,
                                      family=self.family, family_b=tuple(self.family_b), eb_only=self.eb_only,
                                      witness_dir=self.witness_dir)
        outcome = run_search(experiment)
        rows = [result.to_row() for result in outcome.results]
        with open_output(self.outpath) as stream:
            print_records(rows, SWEEP_FIELDS, self.output_format, stream=stream, command='search',
                          mode=self.mode, witnesses=outcome.witnesses)
        if outcome.witnesses:
            for path in outcome.witnesses:
                log.warning(f'Witness: {path}')
            raise ViolationWitnessed(f'{len(outcome.witnesses)} witnesses written')


COUNTEREXAMPLE_PROGRAM = 'moplab counterexample'
COUNTEREXAMPLE_USAGE = f"""\
Usage:
  {COUNTEREXAMPLE_PROGRAM} [-h] [--b LIST] [--q LIST] [--tol VALUE] [--out FILE] [--format FORMAT]
  Threshold exponent and phase-angle check for the diagonal family.\
"""

COUNTEREXAMPLE_HELP = f"""\
{COUNTEREXAMPLE_USAGE}

  For G1 = X1 = Diag(1, b) and G2 = X2 = Diag(b, -1) the square-rooted
  phase-angle bound fails for 2 < 2q < p0(b), where p0 is the unique root
  above 2 of ((1+b)^p + (1-b)^p)(1 + b^p) - 2(1 + b^2)^p.

  Without --q three orders are evaluated per b: 2q = 2.05, the midpoint of
  the violation window, and 2q = p0 + 1. A failed root search is reported
  on its own row.

Options:
  -b, --b          LIST      Comma-separated family parameters in (0, 1) (default: 0.5).
  -q, --q          LIST      Comma-separated orders (default: per b as above).
      --tol        VALUE     Relative acceptance tolerance.
  -o, --out        FILE      Output path (default: stdout).
  -f, --format     FORMAT    Output format ({', '.join(OUTPUT_FORMATS)}, default: table).
  -h, --help                 Show this message and exit.\
"""


class CounterexampleApp(Application):
    """Threshold exponent and phase-angle check for the diagonal family."""

    interface = Interface(COUNTEREXAMPLE_PROGRAM, COUNTEREXAMPLE_USAGE, COUNTEREXAMPLE_HELP)

    bs: List[float] = [0.5]
    interface.add_argument('-b', '--b', type=parse_float_list, default=bs, dest='bs')

    orders: Optional[List[float]] = None
    interface.add_argument('-q', '--q', type=parse_float_list, default=None, dest='orders')

    tolerance: float = None
    interface.add_argument('--tol', type=float, default=None, dest='tolerance')

    outpath: str = '-'
    interface.add_argument('-o', '--out', default=outpath, dest='outpath')

    output_format: str = 'table'
    interface.add_argument('-f', '--format', choices=OUTPUT_FORMATS, default=output_format, dest='output_format')

    exceptions = {
        **get_shared_exception_mapping(__name__)
    }

    def run(self: CounterexampleApp) -> None:
        """Business logic for `counterexample`."""
        rows = run_counterexample(self.bs, self.orders, tol=self.tolerance)
        with open_output(self.outpath) as stream:
            print_records(rows, COUNTEREXAMPLE_FIELDS, self.output_format, stream=stream, command='counterexample')
