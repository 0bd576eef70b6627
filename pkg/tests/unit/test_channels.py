# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Unit tests for channels module."""


# standard libs
import math

# external libs
import pytest
import numpy as np

# internal libs
from moplab.core.exceptions import DimensionError, InputError, NotCompletelyPositive, NotPositiveError
from moplab.matcore import kron, schatten_norm, ginibre, random_unitary, sqrt_factorization
from moplab.channels import (Channel, KrausSet, BipartiteBlockState, EBStatus, apply, apply_tensor_id,
                             choi_from_kraus, kraus_from_choi, conjugate_map, conjugate_state,
                             complementary_channel, kraus_factors, is_entanglement_breaking, is_unital,
                             is_block_toeplitz, is_block_hankel, tensor_channel, identity_channel,
                             depolarizing_channel, completely_depolarizing, unitary_channel,
                             amplitude_damping_channel, dephasing_channel, channel_from_matrix,
                             channel_from_factors, random_cp_map, random_state, random_bipartite_state,
                             random_linear_map, random_toeplitz_state, measure_prepare_channel,
                             random_eb_channel)


def kraus_apply(elements, rho: np.ndarray) -> np.ndarray:
    return sum(A @ rho @ A.conj().T for A in elements)


class TestChannel:
    """Unit tests for `Channel` and Kraus conversions."""

    def test_shape_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            Channel(2, 2, np.eye(3))

    def test_choi_is_read_only(self) -> None:
        ch = identity_channel(2)
        with pytest.raises(ValueError):
            ch.choi[0, 0] = 2

    def test_flags(self) -> None:
        assert identity_channel(2).cp_flag
        assert identity_channel(2).tp_flag
        assert not Channel(2, 2, -np.eye(4)).cp_flag

    def test_apply_matches_kraus(self) -> None:
        rng = np.random.default_rng(3)
        elements = [ginibre(3, 2, rng) for _ in range(3)]
        rho = random_state(2, seed=rng)
        assert np.allclose(apply(choi_from_kraus(elements), rho), kraus_apply(elements, rho))

    def test_apply_rejects_wrong_input(self) -> None:
        with pytest.raises(DimensionError):
            apply(identity_channel(2), np.eye(3))

    def test_kraus_round_trip(self) -> None:
        ch = random_cp_map(2, 3, 4, seed=5)
        assert np.allclose(choi_from_kraus(kraus_from_choi(ch)).choi, ch.choi)

    def test_kraus_rank(self) -> None:
        assert kraus_from_choi(identity_channel(2)).count == 1
        assert kraus_from_choi(random_cp_map(2, 2, 3, seed=1)).count == 3

    def test_kraus_requires_cp(self) -> None:
        with pytest.raises(NotCompletelyPositive):
            kraus_from_choi(Channel(2, 2, -np.eye(4)))

    def test_kraus_set_shapes(self) -> None:
        with pytest.raises(DimensionError):
            KrausSet.of(np.eye(2), np.eye(3))
        with pytest.raises(InputError):
            KrausSet(())

    def test_tensor_identity(self) -> None:
        ch = random_cp_map(2, 2, 2, seed=8)
        rho = random_bipartite_state(3, seed=9).matrix
        expected = sum(kron(ch.block(i, j), rho[3 * i:3 * i + 3, 3 * j:3 * j + 3])
                       for i in range(2) for j in range(2))
        assert np.allclose(apply_tensor_id(ch, rho), expected)

    def test_channel_from_matrix_infers_output(self) -> None:
        ch = channel_from_matrix(np.eye(6), d_in=2)
        assert (ch.d_in, ch.d_out) == (2, 3)
        with pytest.raises(DimensionError):
            channel_from_matrix(np.eye(5), d_in=2)


class TestNamedChannels:
    """Unit tests for named constructors."""

    def test_depolarizing_output(self) -> None:
        rho = np.array([[1.0, 0.0], [0.0, 0.0]])
        out = apply(depolarizing_channel(0.5), rho)
        assert np.allclose(out, 0.5 * rho + 0.25 * np.eye(2))

    def test_depolarizing_range(self) -> None:
        with pytest.raises(InputError):
            depolarizing_channel(2.0)

    def test_completely_depolarizing(self) -> None:
        assert np.allclose(apply(completely_depolarizing(2), np.diag([0.3, 0.7])), np.eye(2) / 2)

    def test_unitary_channel(self) -> None:
        U = random_unitary(2, 4)
        rho = random_state(2, seed=4)
        assert np.allclose(apply(unitary_channel(U), rho), U @ rho @ U.conj().T)
        with pytest.raises(InputError):
            unitary_channel(2 * np.eye(2))

    def test_amplitude_damping(self) -> None:
        out = apply(amplitude_damping_channel(1.0), np.diag([0.0, 1.0]))
        assert np.allclose(out, np.diag([1.0, 0.0]))
        assert amplitude_damping_channel(0.3).tp_flag
        assert not is_unital(amplitude_damping_channel(0.3))

    def test_dephasing(self) -> None:
        rho = np.full((2, 2), 0.5)
        assert np.allclose(apply(dephasing_channel(0.5), rho), np.eye(2) / 2)
        assert is_unital(dephasing_channel(0.2))


class TestConjugation:
    """Unit tests for conjugated maps, states, and complementary channels."""

    def test_conjugate_map_norm_identity(self) -> None:
        rng = np.random.default_rng(12)
        ch = random_cp_map(2, 2, 3, seed=rng, trace_preserving=True)
        rho = random_bipartite_state(2, seed=rng)
        tilde_map, tilde_state = conjugate_map(ch), conjugate_state(rho)
        for q in (1.5, 2.0, 3.0):
            lhs = schatten_norm(apply_tensor_id(ch, rho), q)
            rhs = schatten_norm(apply_tensor_id(tilde_map, tilde_state), q)
            assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_conjugate_map_records_factors(self) -> None:
        ch = random_cp_map(2, 2, 2, seed=2)
        tilde = conjugate_map(ch)
        assert tilde.factors is not None and len(tilde.factors) == 2

    def test_conjugate_state_swaps_gram_order(self) -> None:
        rho = random_bipartite_state(2, seed=6)
        X1, X2 = sqrt_factorization(rho.matrix, blocks=2).factors
        tilde = conjugate_state(rho)
        assert np.allclose(tilde.C, X1 @ X2.conj().T)

    def test_complementary_entries(self) -> None:
        rng = np.random.default_rng(21)
        elements = [ginibre(2, 2, rng) for _ in range(3)]
        rho = random_state(2, seed=rng)
        out = apply(complementary_channel(KrausSet(tuple(elements))), rho)
        for k in range(3):
            for j in range(3):
                expected = np.trace(elements[k] @ rho @ elements[j].conj().T)
                assert abs(out[k, j] - expected) <= 1e-11

    def test_complementary_preserves_trace(self) -> None:
        ch = random_cp_map(2, 2, 3, seed=13, trace_preserving=True)
        assert complementary_channel(kraus_from_choi(ch)).tp_flag

    def test_complementary_is_conjugated_conjugate(self) -> None:
        rng = np.random.default_rng(23)
        for rank in (2, 3, 4):
            ch = random_cp_map(2, 3, rank, seed=rng, trace_preserving=True)
            ks = kraus_from_choi(ch)
            factors = [G.conj() for G in kraus_factors(ks)]
            expected = complementary_channel(ks)
            tilde = conjugate_map(ch, factors)
            assert (tilde.d_in, tilde.d_out) == (expected.d_in, expected.d_out)
            assert np.allclose(tilde.choi, expected.choi, atol=1e-11)

    def test_complementary_pure_output_spectra(self) -> None:
        rng = np.random.default_rng(24)
        ks = kraus_from_choi(random_cp_map(2, 3, 2, seed=rng, trace_preserving=True))
        ch, complement = choi_from_kraus(list(ks.elements)), complementary_channel(ks)
        for _ in range(5):
            psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            rho = np.outer(psi, psi.conj()) / np.vdot(psi, psi).real
            first = np.sort(np.linalg.eigvalsh(apply(ch, rho)))[::-1][:2]
            second = np.sort(np.linalg.eigvalsh(apply(complement, rho)))[::-1][:2]
            assert np.allclose(first, second, atol=1e-10)

    def test_kraus_factors_rebuild_choi(self) -> None:
        ch = random_cp_map(2, 3, 2, seed=14)
        factors = kraus_factors(kraus_from_choi(ch))
        assert np.allclose(channel_from_factors(factors).choi, ch.choi)


class TestStructure:
    """Unit tests for structural predicates and the entanglement-breaking test."""

    def test_unital(self) -> None:
        assert is_unital(identity_channel(3))
        assert not is_unital(random_cp_map(2, 3, 2, seed=1))

    def test_block_toeplitz(self) -> None:
        B, C = random_toeplitz_state(2, seed=3)
        M = np.block([[B, C], [C.conj().T, B]])
        assert is_block_toeplitz(M)
        assert not is_block_toeplitz(np.diag([1.0, 2.0, 3.0, 4.0]))

    def test_block_hankel(self) -> None:
        B, D = np.eye(2), 2 * np.eye(2)
        assert is_block_hankel(np.block([[B, np.eye(2)], [np.eye(2), D]]))
        assert not is_block_hankel(np.block([[B, np.eye(2)], [3 * np.eye(2), D]]))

    def test_block_toeplitz_certificate(self) -> None:
        B, C = random_toeplitz_state(4, seed=25)
        ch = channel_from_matrix(np.block([[B, C], [C.conj().T, B]]), d_in=2)
        report = is_entanglement_breaking(ch)
        assert ch.d_out == 4
        assert report.certified
        assert report.certificate == 'block-Toeplitz Choi matrix'

    def test_block_hankel_certificate(self) -> None:
        G = ginibre(4, 4, 26)
        H = (G + G.conj().T) / 2
        H = 0.5 * H / np.linalg.norm(H, 2)
        ch = channel_from_matrix(np.block([[np.eye(4), H], [H, 2 * np.eye(4)]]), d_in=2)
        assert not is_block_toeplitz(ch.choi)
        report = is_entanglement_breaking(ch)
        assert report.certified
        assert report.certificate == 'block-Hankel Choi matrix'

    def test_large_ppt_without_structure_is_unknown(self) -> None:
        B, C = random_toeplitz_state(4, seed=27)
        choi = np.block([[B, C], [C.conj().T, 2 * B]])
        report = is_entanglement_breaking(channel_from_matrix(choi, d_in=2))
        assert report.status is EBStatus.UNKNOWN
        assert report.certificate == 'positive partial transpose only'

    def test_identity_is_entangling(self) -> None:
        report = is_entanglement_breaking(identity_channel(2))
        assert report.status is EBStatus.NOT_EB
        assert report.min_pt_eigenvalue < 0

    def test_measure_prepare_is_eb(self) -> None:
        report = is_entanglement_breaking(random_eb_channel(2, 2, seed=4))
        assert report.certified

    def test_completely_depolarizing_is_eb(self) -> None:
        assert is_entanglement_breaking(completely_depolarizing(2)).certified

    def test_measure_prepare_output(self) -> None:
        sigma0, sigma1 = np.diag([1.0, 0.0]), np.eye(2) / 2
        ch = measure_prepare_channel(np.eye(2), [sigma0, sigma1])
        out = apply(ch, np.diag([0.25, 0.75]))
        assert np.allclose(out, 0.25 * sigma0 + 0.75 * sigma1)
        assert ch.tp_flag


class TestTensorChannel:
    """Unit tests for `tensor_channel`."""

    def test_product_inputs(self) -> None:
        rng = np.random.default_rng(31)
        ch1, ch2 = random_cp_map(2, 2, 2, seed=rng), random_cp_map(2, 3, 2, seed=rng)
        rho, sigma = random_state(2, seed=rng), random_state(2, seed=rng)
        out = apply(tensor_channel(ch1, ch2), kron(rho, sigma))
        assert np.allclose(out, kron(apply(ch1, rho), apply(ch2, sigma)))


class TestRandomInputs:
    """Unit tests for seeded random constructors."""

    def test_trace_preserving_map(self) -> None:
        ch = random_cp_map(2, 3, 4, seed=1, trace_preserving=True)
        assert ch.cp_flag and ch.tp_flag

    def test_rank_range(self) -> None:
        with pytest.raises(InputError):
            random_cp_map(2, 2, 5)

    def test_state_is_density_matrix(self) -> None:
        rho = random_state(3, seed=2)
        assert np.trace(rho).real == pytest.approx(1.0)
        assert np.min(np.linalg.eigvalsh(rho)) >= -1e-12

    def test_bipartite_rejects_negative(self) -> None:
        with pytest.raises(NotPositiveError):
            BipartiteBlockState(np.eye(2), 5 * np.eye(2), np.eye(2))

    def test_hermitian_block_map(self) -> None:
        ch = random_linear_map(2, 3, seed=3, hermitian_blocks=True)
        assert ch.hermitian
        assert np.allclose(ch.block(0, 1), ch.block(0, 1).conj().T)

    def test_psd_block_map(self) -> None:
        ch = random_linear_map(2, 2, seed=4, psd_blocks=True)
        for i in range(2):
            for j in range(2):
                assert np.min(np.linalg.eigvalsh(ch.block(i, j))) >= -1e-12

    def test_toeplitz_state_is_psd(self) -> None:
        B, C = random_toeplitz_state(3, seed=5)
        M = np.block([[B, C], [C.conj().T, B]])
        assert np.min(np.linalg.eigvalsh(M)) >= -1e-12
        assert math.isclose(np.trace(B).real, 1.0)
