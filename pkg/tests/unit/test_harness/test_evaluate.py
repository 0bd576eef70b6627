# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Unit tests for evaluation applications."""


# standard libs
import json
import math

# external libs
import pytest
import numpy as np
from cmdkit.cli import ArgumentError

# internal libs
from moplab.core.exceptions import resolve_exit_status, EXIT_CLEAN, EXIT_ERROR
from moplab.matcore import encode_matrix
from moplab.channels import apply
from moplab.data import load_channel, dump_document
from moplab.harness.evaluate import NormApp, MopApp, ComplementApp, DecomposeApp, builtin_channel, parse_grid


class TestBuiltinChannel:
    """Unit tests for `builtin_channel`."""

    def test_parametric(self) -> None:
        ch = builtin_channel('depolarizing:0.5')
        assert np.allclose(apply(ch, np.diag([1.0, 0.0])), np.diag([0.75, 0.25]))

    def test_plain(self) -> None:
        assert builtin_channel('identity').d_in == 2

    def test_missing_parameter(self) -> None:
        with pytest.raises(ArgumentError):
            builtin_channel('dephasing')

    def test_unknown(self) -> None:
        with pytest.raises(ArgumentError):
            builtin_channel('erasure:0.1')

    def test_grid(self) -> None:
        assert parse_grid('30,60') == (30, 60)
        with pytest.raises(ArgumentError):
            parse_grid('30')


class TestNormApp:
    """Unit tests for `NormApp`."""

    def test_diagonal(self, tmp_path, capsys) -> None:
        path = tmp_path / 'matrix.json'
        dump_document(encode_matrix(np.diag([3.0, -4.0])), str(path))
        status = NormApp.main(['--in', str(path), '-q', '1,inf', '-f', 'csv'])
        assert resolve_exit_status(status) == EXIT_CLEAN
        header, *lines = capsys.readouterr().out.splitlines()
        assert header == 'measure,q,value'
        assert [float(line.split(',')[2]) for line in lines] == pytest.approx([7.0, 4.0])
        assert lines[1].split(',')[1] == 'inf'

    def test_missing_file(self, tmp_path) -> None:
        status = NormApp.main(['--in', str(tmp_path / 'missing.json')])
        assert resolve_exit_status(status) == EXIT_ERROR


class TestMopApp:
    """Unit tests for `MopApp`."""

    def test_builtin(self, capsys) -> None:
        status = MopApp.main(['-c', 'depolarizing:0.5', '-q', '2', '--grid', '60,120', '-f', 'json'])
        assert resolve_exit_status(status) == EXIT_CLEAN
        row, = json.loads(capsys.readouterr().out)['rows']
        assert row['value'] == pytest.approx(math.sqrt(0.75 ** 2 + 0.25 ** 2), abs=1e-7)
        assert row['heuristic'] is False

    def test_requires_channel(self) -> None:
        assert resolve_exit_status(MopApp.main(['-q', '2'])) == EXIT_ERROR


class TestComplementApp:
    """Unit tests for `ComplementApp`."""

    def test_writes_channel(self, tmp_path) -> None:
        path = tmp_path / 'complement.json'
        status = ComplementApp.main(['-c', 'amplitude-damping:0.3', '-o', str(path)])
        assert resolve_exit_status(status) == EXIT_CLEAN
        ch = load_channel(str(path))
        assert ch.d_in == 2
        assert ch.tp_flag


class TestDecomposeApp:
    """Unit tests for `DecomposeApp`."""

    def test_random_state(self, capsys) -> None:
        assert resolve_exit_status(DecomposeApp.main(['--seed', '3'])) == EXIT_CLEAN
        document = json.loads(capsys.readouterr().out)
        assert document['kind'] == 'toeplitz-decomposition'
        assert document['report']['holds'] is True
