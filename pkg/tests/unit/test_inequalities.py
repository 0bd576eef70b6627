# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Unit tests for inequality checkers and the counterexample family."""


# standard libs
import math

# external libs
import pytest
import numpy as np
from scipy import optimize

# internal libs
from moplab.core.config import config
from moplab.core.exceptions import InputError, NotPositiveError, NoRootFound, UnknownChecker
from moplab.matcore import ginibre, random_unitary, schatten_norm
from moplab.channels import (identity_channel, completely_depolarizing, random_cp_map, random_bipartite_state,
                             random_pure_state, random_linear_map, random_toeplitz_state, random_eb_channel,
                             Channel, BipartiteBlockState)
from moplab.mop import MopOptions
from moplab.report import SKIPPED
from moplab.inequalities import (rhs_case3, theta_objective, check_chris0, check_case3, check_case3_sqrt,
                                 check_alt, check_positive_tensor, check_blockwise, check_psd_phase_sqrt,
                                 check_separable_bound, check_multiplicativity_eb, check_toeplitz_theorem,
                                 check_delta_bound, check_identity_theorem, check_single_kraus,
                                 check_cauchy_schwarz, counterexample_f, p0_of_b, CounterexampleFamily,
                                 CHECKERS, get_checker)


FAST = MopOptions(grid=(60, 120), polish=3, restarts=4, max_iter=200)
ORDERS = [1.0, 1.5, 2.0, 3.0, math.inf]


def gram(G: np.ndarray) -> np.ndarray:
    return G @ G.conj().T


def scan_root(b: float, step: float = 1e-4, p_max: float = 64.0) -> float:
    """Independent root oracle: first sign change above two, then Brent's method."""
    grid = 2 + step * np.arange(1, int((p_max - 2) / step) + 1)
    values = counterexample_f(grid, b)
    k = int(np.nonzero(np.sign(values[:-1]) != np.sign(values[1:]))[0][0])
    return optimize.brentq(counterexample_f, grid[k], grid[k + 1], args=(b, ), xtol=1e-14)


class TestPhaseMaximum:
    """Unit tests for `rhs_case3`."""

    def test_identity_channel(self) -> None:
        maximum = rhs_case3(identity_channel(2), 0.3, 0.7, 2)
        assert maximum.value == pytest.approx(1.0, abs=1e-9)
        assert maximum.method == 'grid'

    def test_zero_weight_is_degenerate(self) -> None:
        ch = random_cp_map(2, 2, 3, seed=1)
        maximum = rhs_case3(ch, 0.0, 0.5, 2)
        assert maximum.method == 'degenerate'
        assert maximum.value == pytest.approx(schatten_norm(0.5 * ch.block(1, 1), 2))

    def test_hermitian_off_diagonal_uses_extreme_points(self) -> None:
        ch = CounterexampleFamily(0.5).channel
        maximum = rhs_case3(ch, 0.4, 0.9, 1.5)
        assert maximum.method == 'extreme-points'
        objective = theta_objective(ch, 0.4, 0.9, 1.5)
        grid_max = max(objective(theta) for theta in np.linspace(0, 2 * math.pi, 720, endpoint=False))
        assert maximum.value == pytest.approx(grid_max, abs=1e-9)

    def test_rejects_negative_weight(self) -> None:
        with pytest.raises(InputError):
            rhs_case3(identity_channel(2), -1.0, 0.5, 2)


class TestChris0:
    """Unit tests for `check_chris0` and `check_case3`."""

    @pytest.mark.parametrize('q', ORDERS)
    def test_identity_channel_holds(self, q: float) -> None:
        rho = random_bipartite_state(2, seed=int(10 * min(q, 5)))
        report = check_chris0(identity_channel(2), rho, q, opts=FAST)
        assert report.holds
        assert report.witness is None

    @pytest.mark.parametrize('q', [1.0, 2.0, 3.0])
    def test_identity_channel_forms_agree(self, q: float) -> None:
        rho = random_bipartite_state(3, seed=5)
        first = check_chris0(identity_channel(2), rho, q, opts=FAST)
        second = check_case3(identity_channel(2), rho, q)
        assert first.lhs == pytest.approx(second.lhs, abs=1e-10)
        assert first.rhs == pytest.approx(second.rhs, abs=1e-10)

    def test_eb_channel_holds(self) -> None:
        rng = np.random.default_rng(8)
        for _ in range(5):
            ch, rho = random_eb_channel(2, 2, seed=rng), random_bipartite_state(2, seed=rng)
            report = check_chris0(ch, rho, 2, opts=FAST)
            assert report.holds

    def test_given_nu(self) -> None:
        report = check_chris0(identity_channel(2), random_bipartite_state(2, seed=1), 2, nu=1.0)
        assert report.params['nu'] == 1.0
        assert not report.notes

    def test_pure_states_hold(self) -> None:
        rng = np.random.default_rng(3)
        for _ in range(5):
            psi = random_pure_state(4, rng)
            rho = BipartiteBlockState.from_matrix(np.outer(psi, psi.conj()))
            assert check_case3(random_cp_map(2, 2, 3, seed=rng, trace_preserving=True), rho, 1.7).holds


class TestCounterexample:
    """Unit tests for the diagonal counterexample family."""

    @pytest.mark.parametrize('b', [0.2, 0.5, 0.9])
    def test_equation_vanishes_at_two(self, b: float) -> None:
        assert counterexample_f(2.0, b) == pytest.approx(0.0, abs=1e-12)

    def test_root_for_half(self) -> None:
        p0 = p0_of_b(0.5)
        assert 2.8 < p0 < 2.9
        assert counterexample_f(p0, 0.5) == pytest.approx(0.0, abs=1e-10)

    def test_root_matches_scan(self) -> None:
        assert p0_of_b(0.5) == pytest.approx(scan_root(0.5), abs=1e-9)

    def test_rejects_out_of_range(self) -> None:
        with pytest.raises(InputError):
            p0_of_b(1.5)

    def test_degenerate_family(self) -> None:
        with pytest.raises(NoRootFound):
            p0_of_b(1e-7)

    @pytest.mark.parametrize('b', [0.3, 0.5, 0.7])
    def test_violation_window(self, b: float) -> None:
        family = CounterexampleFamily(b)
        inside = family.check((2 + family.p0) / 4)
        assert not inside.holds
        assert inside.witness is not None
        assert 'conjecture-violating witness' in inside.notes
        assert inside.params['b'] == b
        assert family.check(1.1 * family.p0 / 2).holds

    def test_violation_near_two(self) -> None:
        assert not CounterexampleFamily(0.5).check(1.025).holds

    def test_sqrt_form_matches_case3(self) -> None:
        family = CounterexampleFamily(0.5)
        q = 1.2
        sqrt_form = family.check(q)
        direct = check_case3(family.channel, family.state, q)
        assert sqrt_form.lhs ** 2 == pytest.approx(direct.lhs, rel=1e-9)
        assert sqrt_form.rhs ** 2 == pytest.approx(direct.rhs, rel=1e-9)
        assert not direct.holds

    def test_single_factor_equality(self) -> None:
        rng = np.random.default_rng(4)
        G1, X1, X2 = ginibre(2, 2, rng), ginibre(2, 2, rng), ginibre(2, 2, rng)
        report = check_case3_sqrt(G1, np.zeros((2, 2)), X1, X2, 1.5)
        assert report.lhs == pytest.approx(report.rhs, rel=1e-10)

    @pytest.mark.parametrize('q', [0.75, 1.5, 2.0])
    def test_proportional_factors_attain_bound(self, q: float) -> None:
        rng = np.random.default_rng(int(20 * q))
        G1, G2, X1 = ginibre(2, 2, rng), ginibre(2, 2, rng), ginibre(3, 3, rng)
        first = check_case3_sqrt(G1, G2, X1, 0.7 * X1, q)
        # blocks are G_i* G_j, so the phase e^{it} on the lower block pairs with alpha = r e^{-it}
        alpha = 0.7 * np.exp(-1j * first.params['theta_star'])
        report = check_case3_sqrt(G1, G2, X1, alpha * X1, q)
        assert report.rhs == pytest.approx(first.rhs, rel=1e-12)
        assert report.lhs == pytest.approx(report.rhs, rel=1e-9)
        assert report.holds

    def test_parameter_range(self) -> None:
        with pytest.raises(InputError):
            CounterexampleFamily(1.5)


class TestTraceInequalities:
    """Unit tests for operator trace and tensor inequalities."""

    @pytest.mark.parametrize('q', [1.0, 1.5, 2.0, 3.0])
    def test_alt_random(self, q: float) -> None:
        rng = np.random.default_rng(int(q * 10))
        for _ in range(10):
            assert check_alt(ginibre(3, 3, rng), ginibre(3, 3, rng), q).holds

    def test_alt_unitary_equality(self) -> None:
        H = ginibre(3, 3, 2)
        report = check_alt(random_unitary(3, 3), H, 2)
        assert report.lhs == pytest.approx(report.rhs, rel=1e-10)

    def test_alt_rejects_quasi_and_infinite(self) -> None:
        with pytest.raises(InputError):
            check_alt(np.eye(2), np.eye(2), 0.75)
        with pytest.raises(InputError):
            check_alt(np.eye(2), np.eye(2), math.inf)

    def test_positive_tensor_single_pair(self) -> None:
        G = ginibre(2, 2, 5)
        report = check_positive_tensor([gram(G)], [ginibre(3, 3, 6)], 1.5)
        assert report.lhs == pytest.approx(report.rhs, rel=1e-10)
        assert report.holds

    def test_positive_tensor_chain(self) -> None:
        rng = np.random.default_rng(7)
        for _ in range(10):
            grams = [gram(ginibre(2, 2, rng)) for _ in range(3)]
            report = check_positive_tensor(grams, [ginibre(2, 2, rng) for _ in range(3)], 1.5)
            assert report.holds
            assert report.lhs <= report.params['weighted'] * (1 + 1e-9) <= report.rhs * (1 + 1e-9) ** 2

    def test_positive_tensor_rejects_indefinite(self) -> None:
        with pytest.raises(NotPositiveError):
            check_positive_tensor([np.diag([1.0, -1.0])], [np.eye(2)], 2)

    def test_cauchy_schwarz(self) -> None:
        rng = np.random.default_rng(9)
        assert check_cauchy_schwarz(ginibre(3, 2, rng), ginibre(3, 2, rng), 3).holds


class TestProvenCases:
    """Unit tests for checkers of proven bounds."""

    @pytest.mark.parametrize('q', ORDERS)
    def test_identity_theorem(self, q: float) -> None:
        rng = np.random.default_rng(11)
        for _ in range(10):
            report = check_identity_theorem(random_bipartite_state(3, seed=rng), q)
            assert report.holds
            assert report.conditions['conjugate_norm_matches']

    def test_single_kraus(self) -> None:
        rng = np.random.default_rng(12)
        report = check_single_kraus(ginibre(3, 2, rng), random_bipartite_state(3, seed=rng), 2)
        assert report.holds
        assert report.conditions['rhs_le_nu_bound']

    def test_blockwise(self) -> None:
        rng = np.random.default_rng(13)
        for _ in range(5):
            ch = random_linear_map(2, 2, seed=rng, psd_blocks=True)
            assert check_blockwise(ch, ginibre(4, 4, rng), 2).holds

    def test_blockwise_rejects_non_hermitian_block(self) -> None:
        with pytest.raises(InputError):
            check_blockwise(identity_channel(2), np.eye(4), 2)

    @pytest.mark.parametrize('q', [0.75, 3.0])
    def test_psd_phase_sqrt(self, q: float) -> None:
        rng = np.random.default_rng(14)
        H1, H2 = ginibre(2, 2, rng), ginibre(2, 2, rng)
        report = check_psd_phase_sqrt(gram(H1), gram(H2), 0.4, 2.1,
                                      ginibre(2, 2, rng), ginibre(2, 2, rng), q)
        assert report.holds

    def test_separable_single_term(self) -> None:
        sigma = np.diag([0.25, 0.75])
        report = check_separable_bound(identity_channel(2), [(sigma, np.eye(2))], 2, opts=FAST)
        assert report.lhs == pytest.approx(schatten_norm(sigma, 2) * schatten_norm(np.eye(2), 2))
        assert report.holds

    def test_separable_rejects_unnormalized(self) -> None:
        with pytest.raises(InputError):
            check_separable_bound(identity_channel(2), [(np.eye(2), np.eye(2))], 2, opts=FAST)

    @pytest.mark.parametrize('q', [1.0, 2.0, math.inf])
    def test_toeplitz_theorem(self, q: float) -> None:
        rng = np.random.default_rng(15)
        for _ in range(5):
            B, C = random_toeplitz_state(2, seed=rng)
            ch = random_linear_map(2, 2, seed=rng, hermitian_blocks=True)
            assert check_toeplitz_theorem(ch, B, C, q).holds

    def test_toeplitz_theorem_requires_hermitian_blocks(self) -> None:
        ch = Channel(2, 2, ginibre(4, 4, 1))
        with pytest.raises(InputError):
            check_toeplitz_theorem(ch, np.eye(2), np.zeros((2, 2)), 2)

    def test_delta_bound(self) -> None:
        rng = np.random.default_rng(16)
        for _ in range(10):
            report = check_delta_bound(random_cp_map(2, 3, 2, seed=rng))
            assert report.holds
        assert check_delta_bound(identity_channel(2)).params['unital']


class TestMultiplicativity:
    """Unit tests for `check_multiplicativity_eb`."""

    def test_completely_depolarizing_factor(self) -> None:
        ch = random_cp_map(2, 2, 2, seed=3, trace_preserving=True)
        report = check_multiplicativity_eb(ch, completely_depolarizing(2), 2, opts=FAST)
        assert report.holds
        assert report.params['nu_eb'] == pytest.approx(2 ** (-0.5), abs=1e-9)

    def test_tolerance_from_configuration(self) -> None:
        ch = random_cp_map(2, 2, 2, seed=3, trace_preserving=True)
        report = check_multiplicativity_eb(ch, completely_depolarizing(2), 2, opts=FAST)
        assert report.tol == config.check.eb_tol
        explicit = check_multiplicativity_eb(ch, completely_depolarizing(2), 2, opts=FAST, tol=1e-3)
        assert explicit.tol == 1e-3

    def test_uncertified_factor_is_skipped(self) -> None:
        report = check_multiplicativity_eb(identity_channel(2), identity_channel(2), 2, opts=FAST)
        assert report.status == SKIPPED
        assert report.holds


class TestRegistry:
    """Unit tests for the checker registry."""

    def test_unknown_checker(self) -> None:
        with pytest.raises(UnknownChecker):
            get_checker('no-such-checker')

    def test_unknown_checker_is_key_error(self) -> None:
        try:
            get_checker('missing')
        except KeyError as error:
            assert 'missing' in str(error)
        else:
            raise AssertionError('Expected KeyError')

    def test_inadmissible_order_is_skipped(self) -> None:
        report = get_checker('alt').sample(np.random.default_rng(1), math.inf)
        assert report.status == SKIPPED
        assert report.holds
        assert report.params['q'] == 'inf'

    def test_sampling_is_seeded(self) -> None:
        checker = get_checker('case3')
        first = checker.sample(np.random.default_rng(42), 2)
        second = checker.sample(np.random.default_rng(42), 2)
        assert first.lhs == second.lhs
        assert first.rhs == second.rhs

    def test_orderless_checkers_record_order(self) -> None:
        report = get_checker('delta-bound').sample(np.random.default_rng(2), 1.5)
        assert report.params['q'] == 1.5

    @pytest.mark.parametrize('name', ['chris0-eb', 'case3-pure', 'identity-theorem',
                                      'cauchy-schwarz', 'toeplitz-decomposition'])
    def test_proven_checkers_hold(self, name: str) -> None:
        rng = np.random.default_rng(5)
        for _ in range(3):
            assert CHECKERS[name].sample(rng, 2, opts=FAST).holds
