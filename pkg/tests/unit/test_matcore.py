# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Unit tests for matrix core module."""


# standard libs
import math

# external libs
import pytest
import numpy as np
from hypothesis import given, settings, strategies as st

# internal libs
from moplab.core.exceptions import InputError, NotPositiveError, DimensionError
from moplab.matcore import (check_order, schatten_norm, entropy, partial_trace_first, partial_transpose,
                            kron, is_hermitian, psd_project_check, psd_power, psd_sqrt, matrix_abs,
                            canonical_phase, sqrt_factorization, ginibre, random_unitary, as_matrix,
                            encode_matrix, decode_matrix)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
sizes = st.integers(min_value=1, max_value=6)
norm_orders = st.sampled_from([1.0, 1.5, 2.0, 3.0, math.inf])


def relative(a: float, b: float) -> float:
    return abs(a - b) / (1 + max(abs(a), abs(b)))


class TestCheckOrder:
    """Unit tests for `check_order`."""

    def test_accepts_infinity(self) -> None:
        order = check_order(math.inf)
        assert order.is_infinite
        assert not order.quasi
        assert str(order) == 'inf'

    def test_quasi_regime(self) -> None:
        assert check_order(0.5).quasi
        assert check_order(0.75).quasi
        assert not check_order(1).quasi

    def test_rejects_small_order(self) -> None:
        with pytest.raises(InputError):
            check_order(0.4)

    def test_rejects_nan(self) -> None:
        with pytest.raises(InputError):
            check_order(float('nan'))

    def test_rejects_text(self) -> None:
        with pytest.raises(InputError):
            check_order('two')


class TestSchattenNorm:
    """Unit tests for `schatten_norm`."""

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds, rows=sizes, cols=sizes)
    def test_frobenius_oracle(self, seed: int, rows: int, cols: int) -> None:
        A = ginibre(rows, cols, seed)
        assert relative(schatten_norm(A, 2), np.linalg.norm(A, 'fro')) <= 1e-10

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds, d=sizes)
    def test_operator_norm(self, seed: int, d: int) -> None:
        A = ginibre(d, d, seed)
        assert relative(schatten_norm(A, math.inf), np.linalg.norm(A, 2)) <= 1e-10

    def test_trace_norm_of_diagonal(self) -> None:
        assert schatten_norm(np.diag([3.0, -4.0]), 1) == pytest.approx(7.0)

    def test_quasi_norm_of_identity(self) -> None:
        assert schatten_norm(np.eye(2), 0.5) == pytest.approx(4.0)

    def test_zero_matrix(self) -> None:
        assert schatten_norm(np.zeros((3, 3)), 2) == 0.0

    def test_rejects_non_finite(self) -> None:
        with pytest.raises(InputError):
            schatten_norm(np.array([[1.0, math.nan], [0.0, 1.0]]), 2)

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds, d=sizes, q=norm_orders)
    def test_triangle_inequality(self, seed: int, d: int, q: float) -> None:
        rng = np.random.default_rng(seed)
        A, B = ginibre(d, d, rng), ginibre(d, d, rng)
        lhs, rhs = schatten_norm(A + B, q), schatten_norm(A, q) + schatten_norm(B, q)
        assert lhs <= rhs * (1 + 1e-9)

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds, d=sizes, q=norm_orders)
    def test_unitary_invariance(self, seed: int, d: int, q: float) -> None:
        rng = np.random.default_rng(seed)
        A, U, V = ginibre(d, d, rng), random_unitary(d, rng), random_unitary(d, rng)
        assert relative(schatten_norm(U @ A @ V, q), schatten_norm(A, q)) <= 1e-9

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds, rows=sizes, cols=sizes, q=norm_orders)
    def test_gram_symmetry(self, seed: int, rows: int, cols: int, q: float) -> None:
        A = ginibre(rows, cols, seed)
        assert relative(schatten_norm(A @ A.conj().T, q), schatten_norm(A.conj().T @ A, q)) <= 1e-9

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds, d=sizes, q=norm_orders)
    def test_cauchy_schwarz(self, seed: int, d: int, q: float) -> None:
        rng = np.random.default_rng(seed)
        X, Y = ginibre(d, d, rng), ginibre(d, d, rng)
        lhs = schatten_norm(Y.conj().T @ X, q)
        rhs = math.sqrt(schatten_norm(X.conj().T @ X, q) * schatten_norm(Y.conj().T @ Y, q))
        assert lhs <= rhs * (1 + 1e-9)


class TestEntropy:
    """Unit tests for `entropy`."""

    def test_maximally_mixed(self) -> None:
        assert entropy(np.eye(2) / 2) == pytest.approx(math.log(2))

    def test_pure_state(self) -> None:
        assert entropy(np.diag([1.0, 0.0])) == pytest.approx(0.0, abs=1e-15)

    def test_rejects_non_hermitian(self) -> None:
        with pytest.raises(InputError):
            entropy(np.array([[0.5, 1.0], [0.0, 0.5]]))

    def test_rejects_negative_eigenvalue(self) -> None:
        with pytest.raises(NotPositiveError):
            entropy(np.diag([1.5, -0.5]))


class TestPartialOperations:
    """Unit tests for partial trace and partial transpose."""

    def test_partial_trace_of_product(self) -> None:
        rng = np.random.default_rng(1)
        A, B = ginibre(2, 2, rng), ginibre(3, 3, rng)
        assert np.allclose(partial_trace_first(kron(A, B), (2, 3)), np.trace(A) * B)

    def test_partial_transpose_of_product(self) -> None:
        rng = np.random.default_rng(2)
        A, B = ginibre(2, 2, rng), ginibre(3, 3, rng)
        assert np.allclose(partial_transpose(kron(A, B), (2, 3), system=1), kron(A, B.T))
        assert np.allclose(partial_transpose(kron(A, B), (2, 3), system=0), kron(A.T, B))

    def test_dimension_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            partial_trace_first(np.eye(5), (2, 3))

    def test_bad_system(self) -> None:
        with pytest.raises(InputError):
            partial_transpose(np.eye(4), (2, 2), system=2)


class TestPositivity:
    """Unit tests for Hermitian and PSD helpers."""

    def test_is_hermitian(self) -> None:
        assert is_hermitian(np.array([[1, 1j], [-1j, 2]]))
        assert not is_hermitian(np.array([[1, 1], [0, 1]]))
        assert not is_hermitian(np.ones((2, 3)))

    def test_psd_check_reports_eigenvalue(self) -> None:
        check = psd_project_check(np.diag([1.0, -0.25]))
        assert not check.is_psd
        assert check.min_eigenvalue == pytest.approx(-0.25)

    def test_psd_check_tolerates_rounding(self) -> None:
        assert psd_project_check(np.diag([1.0, -1e-14])).is_psd

    def test_sqrt_squares_back(self) -> None:
        G = ginibre(4, 4, 3)
        A = G @ G.conj().T
        root = psd_sqrt(A)
        assert np.allclose(root @ root, A)

    def test_inverse_root(self) -> None:
        A = np.diag([4.0, 9.0])
        assert np.allclose(psd_power(A, -0.5), np.diag([0.5, 1 / 3]))

    def test_negative_power_of_singular(self) -> None:
        with pytest.raises(NotPositiveError):
            psd_power(np.diag([1.0, 0.0]), -1)

    def test_matrix_abs(self) -> None:
        A = ginibre(3, 3, 4)
        magnitude = matrix_abs(A)
        assert np.allclose(magnitude @ magnitude, A.conj().T @ A)


class TestFactorization:
    """Unit tests for `sqrt_factorization` and `canonical_phase`."""

    def test_canonical_phase(self) -> None:
        vector = canonical_phase(np.array([0.0, 1j, 1.0]))
        assert vector[1] == pytest.approx(1.0)
        assert vector[2] == pytest.approx(-1j)

    def test_reconstructs_blocks(self) -> None:
        G = ginibre(4, 4, 5)
        M = G.conj().T @ G
        factorization = sqrt_factorization(M, blocks=2)
        assert np.allclose(factorization.full.conj().T @ factorization.full, M)
        assert np.allclose(factorization.block(0, 1), M[:2, 2:])

    def test_rank_drops_null_space(self) -> None:
        v = np.array([1.0, 1j, 0.0, 2.0])
        factorization = sqrt_factorization(np.outer(v, v.conj()), blocks=2)
        assert factorization.rank == 1

    def test_rejects_uneven_blocks(self) -> None:
        with pytest.raises(DimensionError):
            sqrt_factorization(np.eye(3), blocks=2)


class TestRandom:
    """Unit tests for seeded random matrices."""

    def test_unitary(self) -> None:
        U = random_unitary(4, 7)
        assert np.allclose(U.conj().T @ U, np.eye(4))

    def test_seeded(self) -> None:
        assert np.array_equal(ginibre(3, 2, 11), ginibre(3, 2, 11))


class TestInterchange:
    """Unit tests for the matrix interchange format."""

    def test_round_trip_is_exact(self) -> None:
        A = ginibre(3, 2, 9)
        assert np.array_equal(decode_matrix(encode_matrix(A)), A)

    def test_document_layout(self) -> None:
        document = encode_matrix(np.array([[1 + 2j, 3]]))
        assert document == {'rows': 1, 'cols': 2, 'entries': [[1.0, 2.0], [3.0, 0.0]]}

    def test_entry_count_mismatch(self) -> None:
        with pytest.raises(InputError):
            decode_matrix({'rows': 2, 'cols': 2, 'entries': [[1, 0]]})

    def test_missing_field(self) -> None:
        with pytest.raises(InputError):
            decode_matrix({'rows': 1, 'entries': [[1, 0]]})

    def test_scalar_as_matrix(self) -> None:
        assert as_matrix(2.0).shape == (1, 1)
