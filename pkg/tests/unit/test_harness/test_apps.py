# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Unit tests for command-line applications."""


# standard libs
import os
import json

# internal libs
from moplab import MopLabApp
from moplab.core.exceptions import resolve_exit_status, EXIT_CLEAN, EXIT_ERROR, EXIT_VIOLATION
from moplab.harness import CheckApp, CounterexampleApp, SearchApp, SweepApp


class TestCounterexampleApp:
    """Unit tests for `CounterexampleApp`."""

    def test_csv(self, capsys) -> None:
        status = CounterexampleApp.main(['-b', '0.5', '-f', 'csv'])
        assert resolve_exit_status(status) == EXIT_CLEAN
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == 'b,p0,q,two_q,lhs,rhs,gap,holds,error'
        assert len(lines) == 4
        assert [line.split(',')[7] for line in lines[1:]] == ['false', 'false', 'true']

    def test_writes_file(self, tmp_path) -> None:
        path = tmp_path / 'table.json'
        status = CounterexampleApp.main(['-b', '0.3,0.7', '-q', '1.1', '-f', 'json', '-o', str(path)])
        assert resolve_exit_status(status) == EXIT_CLEAN
        document = json.loads(path.read_text())
        assert [row['b'] for row in document['rows']] == [0.3, 0.7]


class TestCheckApp:
    """Unit tests for `CheckApp`."""

    def test_list(self, capsys) -> None:
        assert resolve_exit_status(CheckApp.main(['--list'])) == EXIT_CLEAN
        assert 'identity-theorem' in capsys.readouterr().out

    def test_proven_case(self, capsys) -> None:
        status = CheckApp.main(['identity-theorem', '-q', '1,2', '-f', 'csv'])
        assert resolve_exit_status(status) == EXIT_CLEAN
        assert len(capsys.readouterr().out.splitlines()) == 3

    def test_unknown_checker(self) -> None:
        assert resolve_exit_status(CheckApp.main(['no-such-checker'])) == EXIT_ERROR

    def test_replays_witness(self, tmp_path) -> None:
        status = SearchApp.main(['--mode', 'case3', '--family', '-b', '0.5', '-q', '1.2', '-n', '0',
                                 '--out-dir', str(tmp_path), '-o', str(tmp_path / 'rows.csv')])
        assert resolve_exit_status(status) == EXIT_VIOLATION
        path, = [name for name in os.listdir(tmp_path) if name.startswith('witness-')]
        status = CheckApp.main(['--in', str(tmp_path / path), '-f', 'csv'])
        assert resolve_exit_status(status) == EXIT_VIOLATION


class TestSweepApps:
    """Unit tests for `SweepApp` and `SearchApp`."""

    def test_sweep_rows(self, capsys) -> None:
        status = SweepApp.main(['-c', 'cauchy-schwarz,delta-bound', '-q', '1.5,2', '-n', '3'])
        assert resolve_exit_status(status) == EXIT_CLEAN
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == 'name,seed,q,lhs,rhs,gap,holds'
        assert len(lines) == 1 + 2 * 2 * 3

    def test_sweep_requires_checkers(self) -> None:
        assert resolve_exit_status(SweepApp.main([])) != EXIT_CLEAN

    def test_search_clean(self, tmp_path, capsys) -> None:
        status = SearchApp.main(['-n', '0', '--out-dir', str(tmp_path)])
        assert resolve_exit_status(status) == EXIT_CLEAN


class TestMopLabApp:
    """Unit tests for the command group."""

    def test_dispatch(self, capsys) -> None:
        assert resolve_exit_status(MopLabApp.main(['check', '--list'])) == EXIT_CLEAN
        assert 'cauchy-schwarz' in capsys.readouterr().out
