# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Unit tests for configuration helpers."""


# external libs
import pytest
from cmdkit.config import Configuration, ConfigurationError, Namespace

# internal libs
from moplab.core.config import default, get_threads, config_hash, dotted_keys, ACTIVE_CONFIG_VARS


def with_user(**sections) -> Configuration:
    return Configuration(default=Namespace(default), user=Namespace(sections))


class TestDefaults:
    """Unit tests for the default configuration."""

    def test_numerical_sections(self) -> None:
        assert default['mop']['restarts'] == 64
        assert default['check']['tol'] == 1e-9
        assert default['toeplitz']['tol'] == 1e-8
        assert default['counterexample']['p_max'] == 64
        assert default['check']['eb_tol'] == 1e-5
        assert default['threads'] == 1


class TestDottedKeys:
    """Unit tests for `dotted_keys`."""

    def test_keeps_underscores(self) -> None:
        keys = dotted_keys({'check': {'witness_tol': 1e-8, 'eb_tol': 1e-5}, 'threads': 1})
        assert keys == ['check.witness_tol', 'check.eb_tol', 'threads']

    def test_active_variables(self) -> None:
        assert 'mop.max_iter' in ACTIVE_CONFIG_VARS
        assert 'check.eb_tol' in ACTIVE_CONFIG_VARS
        assert 'mop.max.iter' not in ACTIVE_CONFIG_VARS


class TestThreads:
    """Unit tests for `get_threads`."""

    def test_default(self) -> None:
        assert get_threads(Configuration(default=Namespace(default))) == 1

    def test_user_override(self) -> None:
        assert get_threads(with_user(threads=4)) == 4

    @pytest.mark.parametrize('value', [0, -2, 'many'])
    def test_invalid(self, value) -> None:
        try:
            get_threads(with_user(threads=value))
        except ConfigurationError as error:
            assert 'threads' in str(error)
        else:
            raise AssertionError('Expected ConfigurationError')


class TestConfigHash:
    """Unit tests for `config_hash`."""

    def test_stable(self) -> None:
        digest = config_hash(Configuration(default=Namespace(default)))
        assert len(digest) == 16
        assert int(digest, 16) >= 0
        assert digest == config_hash(Configuration(default=Namespace(default)))

    def test_tracks_numerical_settings(self) -> None:
        base = config_hash(Configuration(default=Namespace(default)))
        assert config_hash(with_user(mop={'restarts': 3})) != base

    def test_ignores_console_settings(self) -> None:
        base = config_hash(Configuration(default=Namespace(default)))
        assert config_hash(with_user(console={'theme': 'solarized-dark'})) == base
