# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Command-line front-end and experiment orchestration."""


# internal libs
from moplab.harness.experiment import (ExperimentConfig, Cell, CellResult, SearchOutcome, SWEEP_FIELDS,
                                       COUNTEREXAMPLE_FIELDS, cell_seed, build_cells, evaluate_cell,
                                       run_sweep, run_search, run_counterexample,
                                       write_witness, load_witness, replay_witness)
from moplab.harness.evaluate import NormApp, MopApp, ComplementApp, DecomposeApp
from moplab.harness.check import CheckApp
from moplab.harness.sweep import SweepApp, SearchApp, CounterexampleApp

# public interface
__all__ = ['ExperimentConfig', 'Cell', 'CellResult', 'SearchOutcome', 'SWEEP_FIELDS', 'COUNTEREXAMPLE_FIELDS',
           'cell_seed', 'build_cells', 'evaluate_cell', 'run_sweep', 'run_search', 'run_counterexample',
           'write_witness', 'load_witness', 'replay_witness',
           'NormApp', 'MopApp', 'ComplementApp', 'DecomposeApp', 'CheckApp',
           'SweepApp', 'SearchApp', 'CounterexampleApp', ]
