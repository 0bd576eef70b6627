# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""
Linear maps on matrices, bipartite block states, and their constructions.

A `Channel` stores the unnormalized Choi block matrix of a linear map
C^d_in -> C^d_out: block (i, j) is the image of the matrix unit e^{ij}.
Row/column index of the Choi matrix is i * d_out + a for input index i and
output index a. Kraus elements are d_out x d_in matrices.
"""


# type annotations
from __future__ import annotations
from typing import Tuple, List, Optional, Sequence, Union

# standard libs
import math
import functools
from enum import Enum
from dataclasses import dataclass

# external libs
import numpy as np

# internal libs
from moplab.core.config import config
from moplab.core.logging import Logger
from moplab.core.exceptions import (InputError, DimensionError, NotPositiveError,
                                    NotCompletelyPositive, NotTracePreserving)
from moplab.matcore import (ComplexMatrix, Seed, as_matrix, as_generator, maxabs, is_hermitian,
                            psd_project_check, psd_power, partial_transpose, sqrt_factorization,
                            canonical_phase, ginibre, random_unitary)

# public interface
__all__ = ['Channel', 'KrausSet', 'BipartiteBlockState', 'EBStatus', 'EBReport',
           'apply', 'apply_tensor_id', 'kraus_from_choi', 'choi_from_kraus', 'conjugate_map',
           'conjugate_state', 'complementary_channel', 'kraus_factors', 'is_entanglement_breaking',
           'is_unital', 'is_block_toeplitz', 'is_block_hankel', 'tensor_channel',
           'identity_channel', 'depolarizing_channel', 'completely_depolarizing', 'unitary_channel',
           'amplitude_damping_channel', 'dephasing_channel', 'channel_from_matrix', 'channel_from_factors',
           'random_cp_map', 'random_state', 'random_bipartite_state', 'random_pure_state',
           'random_linear_map', 'random_toeplitz_state', 'separable_components',
           'measure_prepare_channel', 'random_eb_channel', ]

# initialize logger
log = Logger.with_name(__name__)


# Structural equality for block-Toeplitz/Hankel certificates
STRUCTURE_TOL: float = 1e-12


@dataclass(frozen=True, eq=False)
class Channel:
    """
    Linear map stored as its Choi block matrix.

    `factors` records the blocks G_i used to build a conjugated map, since
    that construction depends on the chosen factorization.
    """

    d_in: int
    d_out: int
    choi: ComplexMatrix
    factors: Optional[Tuple[ComplexMatrix, ...]] = None
    label: str = ''

    def __post_init__(self: Channel) -> None:
        choi = as_matrix(self.choi, 'Choi matrix').copy()
        size = self.d_in * self.d_out
        if self.d_in < 1 or self.d_out < 1 or choi.shape != (size, size):
            raise DimensionError(f'Choi matrix of shape {choi.shape} does not match '
                                 f'd_in={self.d_in}, d_out={self.d_out}')
        choi.setflags(write=False)
        object.__setattr__(self, 'choi', choi)

    @property
    def blocks4(self: Channel) -> np.ndarray:
        """Choi matrix as a four-index array [i, a, j, b]."""
        return self.choi.reshape(self.d_in, self.d_out, self.d_in, self.d_out)

    def block(self: Channel, i: int, j: int) -> ComplexMatrix:
        """Block (i, j), the image of the matrix unit e^{ij}."""
        return self.blocks4[i, :, j, :].copy()

    @functools.cached_property
    def hermitian(self: Channel) -> bool:
        """Hermiticity-preserving map (Hermitian Choi matrix)."""
        return is_hermitian(self.choi)

    @functools.cached_property
    def cp_flag(self: Channel) -> bool:
        """Completely positive: Choi matrix PSD within tolerance."""
        return self.hermitian and psd_project_check(self.choi).is_psd

    @functools.cached_property
    def tp_flag(self: Channel) -> bool:
        """Trace preserving: tracing the output of the Choi matrix gives the identity."""
        reduced = np.einsum('iaja->ij', self.blocks4)
        return maxabs(reduced - np.eye(self.d_in)) <= 1e-10

    def require_cp(self: Channel, operation: str) -> None:
        if not self.cp_flag:
            raise NotCompletelyPositive(f'{operation} requires a completely positive map')

    def require_tp(self: Channel, operation: str) -> None:
        if not self.tp_flag:
            raise NotTracePreserving(f'{operation} requires a trace-preserving map')

    def __repr__(self: Channel) -> str:
        label = f' {self.label!r}' if self.label else ''
        return f'<Channel{label} d_in={self.d_in} d_out={self.d_out}>'


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Kraus elements A_k (each d_out x d_in) of a completely positive map."""

    elements: Tuple[ComplexMatrix, ...]

    def __post_init__(self: KrausSet) -> None:
        elements = tuple(as_matrix(A, 'Kraus element') for A in self.elements)
        if not elements:
            raise InputError('Kraus set must contain at least one element')
        shape = elements[0].shape
        if any(A.shape != shape for A in elements):
            raise DimensionError('Kraus elements must share one shape')
        object.__setattr__(self, 'elements', elements)

    @classmethod
    def of(cls, *elements) -> KrausSet:
        return cls(tuple(elements))

    @property
    def d_in(self: KrausSet) -> int:
        return self.elements[0].shape[1]

    @property
    def d_out(self: KrausSet) -> int:
        return self.elements[0].shape[0]

    @property
    def count(self: KrausSet) -> int:
        return len(self.elements)

    @property
    def stacked(self: KrausSet) -> np.ndarray:
        """Elements as an array [k, a, i]."""
        return np.stack(self.elements)

    def __len__(self: KrausSet) -> int:
        return len(self.elements)

    def __iter__(self: KrausSet):
        return iter(self.elements)


@dataclass(frozen=True, eq=False)
class BipartiteBlockState:
    """
    PSD matrix on C^2 (x) C^d partitioned as [[B, C], [C*, D]].

    Construction checks Hermiticity and positivity of the assembled matrix.
    """

    B: ComplexMatrix
    C: ComplexMatrix
    D: ComplexMatrix

    def __post_init__(self: BipartiteBlockState) -> None:
        B, C, D = (as_matrix(M, name) for M, name in ((self.B, 'B'), (self.C, 'C'), (self.D, 'D')))
        d = B.shape[0]
        if any(M.shape != (d, d) for M in (B, C, D)):
            raise DimensionError(f'Blocks must all be {d}x{d}')
        for name, M in (('B', B), ('C', C), ('D', D)):
            M.setflags(write=False)
            object.__setattr__(self, name, M)
        full = self.matrix
        if not is_hermitian(full, tol=1e-10):
            raise InputError('Bipartite state must be Hermitian')
        check = psd_project_check(full)
        if not check.is_psd:
            raise NotPositiveError(f'Bipartite state is not PSD (eigenvalue {check.min_eigenvalue:.3e})',
                                   check.min_eigenvalue)

    @classmethod
    def from_matrix(cls, rho) -> BipartiteBlockState:
        rho = as_matrix(rho, 'bipartite state')
        if rho.shape[0] != rho.shape[1] or rho.shape[0] % 2:
            raise DimensionError(f'Bipartite state must be 2d x 2d (given {rho.shape})')
        if not is_hermitian(rho, tol=1e-10):
            raise InputError('Bipartite state must be Hermitian')
        d = rho.shape[0] // 2
        return cls(rho[:d, :d], rho[:d, d:], rho[d:, d:])

    @property
    def d(self: BipartiteBlockState) -> int:
        return self.B.shape[0]

    @property
    def matrix(self: BipartiteBlockState) -> ComplexMatrix:
        return np.block([[self.B, self.C], [self.C.conj().T, self.D]])


def _as_state_matrix(rho: Union[BipartiteBlockState, ComplexMatrix]) -> ComplexMatrix:
    return rho.matrix if isinstance(rho, BipartiteBlockState) else as_matrix(rho, 'state')


def apply(ch: Channel, rho) -> ComplexMatrix:
    """Image of a d_in x d_in matrix: sum over rho_ij times block (i, j)."""
    rho = as_matrix(rho, 'input matrix')
    if rho.shape != (ch.d_in, ch.d_in):
        raise DimensionError(f'Input of shape {rho.shape} for map with d_in={ch.d_in}')
    return np.einsum('ij,iajb->ab', rho, ch.blocks4)


def apply_tensor_id(ch: Channel, rho: Union[BipartiteBlockState, ComplexMatrix]) -> ComplexMatrix:
    """
    Action of the map tensored with the identity on a block matrix.

    `rho` is a (d_in * d) square matrix seen as a d_in x d_in grid of d x d
    blocks rho_ij; the result is sum_ij Phi_ij (x) rho_ij.
    """
    R = _as_state_matrix(rho)
    if R.shape[0] != R.shape[1] or R.shape[0] % ch.d_in:
        raise DimensionError(f'Block matrix of shape {R.shape} for map with d_in={ch.d_in}')
    d = R.shape[0] // ch.d_in
    R4 = R.reshape(ch.d_in, d, ch.d_in, d)
    out = np.einsum('iajb,icje->acbe', ch.blocks4, R4)
    return out.reshape(ch.d_out * d, ch.d_out * d)


def choi_from_kraus(ks: Union[KrausSet, Sequence[ComplexMatrix]], label: str = '') -> Channel:
    """Choi matrix sum_k vec(A_k) vec(A_k)* with blocks sum_k A_k e^{ij} A_k*."""
    ks = ks if isinstance(ks, KrausSet) else KrausSet(tuple(ks))
    vectors = ks.stacked.transpose(0, 2, 1).reshape(ks.count, -1)  # [k, (i, a)]
    choi = vectors.T @ vectors.conj()
    return Channel(ks.d_in, ks.d_out, choi, label=label)


def kraus_from_choi(ch: Channel) -> KrausSet:
    """
    Canonical Kraus elements from the Choi eigen-decomposition.

    Eigenvalues at or below kraus_tol * Tr(choi) are dropped; the rest are
    taken in descending order with phase-fixed eigenvectors.
    """
    ch.require_cp('Kraus decomposition')
    values, vectors = np.linalg.eigh((ch.choi + ch.choi.conj().T) / 2)
    order = np.argsort(values)[::-1]
    values, vectors = values[order], vectors[:, order]
    threshold = float(config.numerics.kraus_tol) * max(float(np.sum(values)), 0.0)
    elements = [
        (math.sqrt(value) * canonical_phase(vectors[:, k])).reshape(ch.d_in, ch.d_out).T
        for k, value in enumerate(values) if value > threshold
    ]
    if not elements:
        elements = [np.zeros((ch.d_out, ch.d_in), dtype=np.complex128)]
    log.trace(f'Kraus rank {len(elements)} for {ch!r}')
    return KrausSet(tuple(elements))


def _assemble_from_factors(factors: Sequence[ComplexMatrix]) -> ComplexMatrix:
    """Choi matrix with blocks G_i G_j* from factor blocks G_i (each R x d)."""
    G = np.stack([as_matrix(F, 'factor block') for F in factors])  # [i, r, k]
    n, rank, _ = G.shape
    out = np.einsum('irk,jsk->irjs', G, G.conj())
    return out.reshape(n * rank, n * rank)


def conjugate_map(ch: Channel, factors: Optional[Sequence[ComplexMatrix]] = None) -> Channel:
    """
    Conjugated map with blocks G_i G_j* from a factorization Phi_ij = G_i* G_j.

    Without explicit `factors` the canonical factorization of the Choi matrix
    is used (`sqrt_factorization`). The result records the factors it used.
    """
    ch.require_cp('Conjugation')
    if factors is None:
        factors = sqrt_factorization(ch.choi, blocks=ch.d_in).factors
    factors = tuple(as_matrix(F, 'factor block') for F in factors)
    if len(factors) != ch.d_in or any(F.shape[1] != ch.d_out for F in factors):
        raise DimensionError(f'Expected {ch.d_in} factor blocks with {ch.d_out} columns')
    rank = factors[0].shape[0]
    return Channel(ch.d_in, rank, _assemble_from_factors(factors), factors=factors,
                   label=f'conjugate({ch.label})' if ch.label else 'conjugate')


def conjugate_state(rho: BipartiteBlockState) -> BipartiteBlockState:
    """Conjugated state with blocks X_i X_j* from the canonical factorization rho = X*X."""
    X1, X2 = sqrt_factorization(rho.matrix, blocks=2).factors
    return BipartiteBlockState(X1 @ X1.conj().T, X1 @ X2.conj().T, X2 @ X2.conj().T)


def kraus_factors(ks: KrausSet) -> Tuple[ComplexMatrix, ...]:
    """Blocks G_m (K x d_out) with G_m* |k> = A_k |m>, so that G_m* G_l = Phi_ml."""
    A = ks.stacked  # [k, a, m]
    return tuple(A[:, :, m].conj() for m in range(ks.d_in))


def complementary_channel(ks: KrausSet) -> Channel:
    """Map C^d_in -> C^K with entries <k|Phi'(rho)|j> = Tr[A_k rho A_j*]."""
    A = ks.stacked
    blocks = np.einsum('kam,jal->mklj', A, A.conj())
    size = ks.d_in * ks.count
    return Channel(ks.d_in, ks.count, blocks.reshape(size, size), label='complementary')


def is_unital(ch: Channel, tol: float = 1e-10) -> bool:
    """Identity maps to identity."""
    if ch.d_in != ch.d_out:
        return False
    image = sum(ch.block(i, i) for i in range(ch.d_in))
    return maxabs(image - np.eye(ch.d_out)) <= tol


def _block_structure(ch_or_matrix, blocks: int, key) -> bool:
    M = ch_or_matrix.choi if isinstance(ch_or_matrix, Channel) else as_matrix(ch_or_matrix)
    if M.shape[0] % blocks:
        raise DimensionError(f'Matrix of shape {M.shape} cannot be split into {blocks} blocks')
    d = M.shape[0] // blocks
    M4 = M.reshape(blocks, d, blocks, d)
    tol = STRUCTURE_TOL * (1 + maxabs(M))
    reference = {}
    for i in range(blocks):
        for j in range(blocks):
            label = key(i, j)
            if label not in reference:
                reference[label] = M4[i, :, j, :]
            elif maxabs(M4[i, :, j, :] - reference[label]) > tol:
                return False
    return True


def is_block_toeplitz(M, blocks: int = 2) -> bool:
    """Block (i, j) depends only on i - j."""
    return _block_structure(M, blocks, lambda i, j: i - j)


def is_block_hankel(M, blocks: int = 2) -> bool:
    """Block (i, j) depends only on i + j."""
    return _block_structure(M, blocks, lambda i, j: i + j)


class EBStatus(Enum):
    """Outcome of the entanglement-breaking test."""
    EB = 'EB'
    NOT_EB = 'NOT_EB'
    UNKNOWN = 'UNKNOWN'


@dataclass(frozen=True, eq=False)
class EBReport:
    status: EBStatus
    certificate: str
    min_pt_eigenvalue: float

    @property
    def certified(self: EBReport) -> bool:
        return self.status is EBStatus.EB


def is_entanglement_breaking(ch: Channel, tol: Optional[float] = None) -> EBReport:
    """
    Three-valued entanglement-breaking test on the Choi matrix.

    A negative partial transpose proves entanglement (NOT_EB). A positive
    partial transpose proves separability in dimension d_in * d_out <= 6, and
    for qubit inputs when the Choi matrix is exactly block-Toeplitz or
    block-Hankel. Everything else is UNKNOWN.
    """
    ch.require_cp('Entanglement-breaking test')
    tol = float(config.numerics.psd_tol) if tol is None else tol
    transposed = partial_transpose(ch.choi, (ch.d_in, ch.d_out), system=1)
    smallest = float(np.min(np.linalg.eigvalsh((transposed + transposed.conj().T) / 2)))
    if smallest < -tol * (1 + maxabs(ch.choi)):
        return EBReport(EBStatus.NOT_EB, 'negative partial transpose', smallest)
    if ch.d_in * ch.d_out <= 6:
        return EBReport(EBStatus.EB, 'positive partial transpose in dimension <= 6', smallest)
    if ch.d_in == 2 and is_block_toeplitz(ch.choi, 2):
        return EBReport(EBStatus.EB, 'block-Toeplitz Choi matrix', smallest)
    if ch.d_in == 2 and is_block_hankel(ch.choi, 2):
        return EBReport(EBStatus.EB, 'block-Hankel Choi matrix', smallest)
    return EBReport(EBStatus.UNKNOWN, 'positive partial transpose only', smallest)


def tensor_channel(ch1: Channel, ch2: Channel) -> Channel:
    """Choi matrix of the tensor product map, inputs and outputs ordered (first, second)."""
    out = np.einsum('iajb,kcle->ikacjlbe', ch1.blocks4, ch2.blocks4)
    d_in, d_out = ch1.d_in * ch2.d_in, ch1.d_out * ch2.d_out
    label = f'{ch1.label or "map"} x {ch2.label or "map"}'
    return Channel(d_in, d_out, out.reshape(d_in * d_out, d_in * d_out), label=label)


def channel_from_matrix(choi, d_in: int, d_out: Optional[int] = None, label: str = '') -> Channel:
    """Wrap a Choi matrix (square, size d_in * d_out)."""
    choi = as_matrix(choi, 'Choi matrix')
    if d_out is None:
        if choi.shape[0] % d_in:
            raise DimensionError(f'Choi matrix of shape {choi.shape} incompatible with d_in={d_in}')
        d_out = choi.shape[0] // d_in
    return Channel(d_in, d_out, choi, label=label)


def identity_channel(d: int = 2) -> Channel:
    return choi_from_kraus([np.eye(d)], label='identity')


def depolarizing_channel(lam: float, d: int = 2) -> Channel:
    """rho -> (1 - lam) rho + lam Tr(rho) I / d."""
    if not 0 <= lam <= 1 + 1 / (d * d - 1):
        raise InputError(f'Depolarizing parameter out of range (given {lam})')
    identity = identity_channel(d).choi
    choi = (1 - lam) * identity + lam * np.eye(d * d) / d
    return Channel(d, d, choi, label=f'depolarizing({lam:g})')


def completely_depolarizing(d: int = 2) -> Channel:
    """rho -> Tr(rho) I / d."""
    return Channel(d, d, np.eye(d * d) / d, label='completely-depolarizing')


def unitary_channel(U) -> Channel:
    U = as_matrix(U, 'unitary')
    if maxabs(U.conj().T @ U - np.eye(U.shape[1])) > 1e-10:
        raise InputError('Expected an isometry for unitary channel')
    return choi_from_kraus([U], label='unitary')


def amplitude_damping_channel(gamma: float) -> Channel:
    if not 0 <= gamma <= 1:
        raise InputError(f'Damping parameter must lie in [0, 1] (given {gamma})')
    K0 = np.array([[1, 0], [0, math.sqrt(1 - gamma)]])
    K1 = np.array([[0, math.sqrt(gamma)], [0, 0]])
    return choi_from_kraus([K0, K1], label=f'amplitude-damping({gamma:g})')


def dephasing_channel(p: float) -> Channel:
    if not 0 <= p <= 1:
        raise InputError(f'Dephasing parameter must lie in [0, 1] (given {p})')
    Z = np.diag([1.0, -1.0])
    return choi_from_kraus([math.sqrt(1 - p) * np.eye(2), math.sqrt(p) * Z], label=f'dephasing({p:g})')


def random_cp_map(d_in: int, d_out: int, rank: int, seed: Seed = None,
                  trace_preserving: bool = False) -> Channel:
    """
    Random CP map from `rank` standard complex Gaussian Kraus elements.

    With `trace_preserving` the elements are normalized as A_k S^(-1/2) where
    S = sum_k A_k* A_k, which leaves the Kraus rank unchanged.
    """
    if not 1 <= rank <= d_in * d_out:
        raise InputError(f'Kraus rank must lie in [1, {d_in * d_out}] (given {rank})')
    rng = as_generator(seed)
    elements = [ginibre(d_out, d_in, rng) for _ in range(rank)]
    if trace_preserving:
        S = sum(A.conj().T @ A for A in elements)
        correction = psd_power(S, -0.5)
        elements = [A @ correction for A in elements]
    return choi_from_kraus(elements, label=f'random-cp({d_in},{d_out},{rank})')


def random_state(d: int, rank: Optional[int] = None, seed: Seed = None) -> ComplexMatrix:
    """Random unit-trace density matrix G G* / Tr(G G*) with G a d x rank Ginibre matrix."""
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise InputError(f'State rank must lie in [1, {d}] (given {rank})')
    G = ginibre(d, rank, seed)
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_bipartite_state(d: int, seed: Seed = None, rank: Optional[int] = None) -> BipartiteBlockState:
    """Random unit-trace PSD matrix on C^2 (x) C^d."""
    return BipartiteBlockState.from_matrix(random_state(2 * d, rank, seed))


def random_pure_state(d: int, seed: Seed = None) -> np.ndarray:
    """Random unit vector (Haar distributed)."""
    rng = as_generator(seed)
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return psi / np.linalg.norm(psi)


def random_linear_map(d_in: int, d_out: int, seed: Seed = None,
                      hermitian_blocks: bool = False, psd_blocks: bool = False) -> Channel:
    """
    Random Hermiticity-preserving linear map, generally not CP.

    `psd_blocks` draws every block as a PSD matrix, `hermitian_blocks` draws
    every block Hermitian; in both cases block (j, i) equals block (i, j).
    Otherwise the Choi matrix is a random Hermitian matrix.
    """
    rng = as_generator(seed)
    if not (hermitian_blocks or psd_blocks):
        G = ginibre(d_in * d_out, d_in * d_out, rng)
        return Channel(d_in, d_out, (G + G.conj().T) / 2, label='random-linear')
    blocks = np.zeros((d_in, d_out, d_in, d_out), dtype=np.complex128)
    for i in range(d_in):
        for j in range(i, d_in):
            G = ginibre(d_out, d_out, rng)
            block = G @ G.conj().T if psd_blocks else (G + G.conj().T) / 2
            blocks[i, :, j, :] = block
            blocks[j, :, i, :] = block
    size = d_in * d_out
    kind = 'psd-blocks' if psd_blocks else 'hermitian-blocks'
    return Channel(d_in, d_out, blocks.reshape(size, size), label=f'random-{kind}')


def random_toeplitz_state(d: int, seed: Seed = None, normal: bool = True,
                          radius: float = 0.95) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """
    Random blocks (B, C) with [[B, C], [C*, B]] PSD and B positive definite.

    C = B^(1/2) T B^(1/2) for a contraction T; with `normal` the contraction
    is U diag(l) U* with eigenvalues drawn inside the disk of `radius`.
    """
    rng = as_generator(seed)
    G = ginibre(d, d, rng)
    B = G @ G.conj().T + 0.1 * np.eye(d)
    B = B / np.trace(B).real
    if normal:
        U = random_unitary(d, rng)
        moduli = radius * np.sqrt(rng.uniform(0, 1, d))
        angles = rng.uniform(0, 2 * math.pi, d)
        T = (U * (moduli * np.exp(1j * angles))) @ U.conj().T
    else:
        H = ginibre(d, d, rng)
        T = radius * H / np.linalg.norm(H, 2)
    root = psd_power(B, 0.5)
    return B, root @ T @ root


def separable_components(d_in: int, d: int, count: int,
                         seed: Seed = None) -> List[Tuple[ComplexMatrix, ComplexMatrix]]:
    """Random (sigma_k, B_k) pairs: unit-trace sigma_k on C^d_in and PSD B_k on C^d."""
    rng = as_generator(seed)
    components = []
    for _ in range(count):
        sigma = random_state(d_in, seed=rng)
        weight = rng.uniform(0.1, 1.0)
        components.append((sigma, weight * random_state(d, seed=rng)))
    return components


def channel_from_factors(factors: Sequence[ComplexMatrix], label: str = '') -> Channel:
    """CP map with blocks Phi_ij = G_i* G_j from factor blocks G_i (each R x d)."""
    factors = tuple(as_matrix(F, 'factor block') for F in factors)
    if not factors:
        raise InputError('At least one factor block is required')
    shape = factors[0].shape
    if any(F.shape != shape for F in factors):
        raise DimensionError('Factor blocks must share one shape')
    G = np.stack(factors)  # [i, r, a]
    n, _, d = G.shape
    blocks = np.einsum('ira,jrb->iajb', G.conj(), G)
    return Channel(n, d, blocks.reshape(n * d, n * d), label=label)


def measure_prepare_channel(basis, states: Sequence[ComplexMatrix], label: str = 'measure-prepare') -> Channel:
    """
    Entanglement-breaking map rho -> sum_k <u_k|rho|u_k> sigma_k.

    `basis` holds the orthonormal measurement vectors u_k as columns and
    `states` the prepared outputs sigma_k.
    """
    U = as_matrix(basis, 'measurement basis')
    states = [as_matrix(sigma, 'prepared state') for sigma in states]
    if len(states) != U.shape[1]:
        raise DimensionError(f'Expected {U.shape[1]} prepared states (given {len(states)})')
    d_in, d_out = U.shape[0], states[0].shape[0]
    choi = sum(np.kron(np.outer(U[:, k].conj(), U[:, k]), sigma) for k, sigma in enumerate(states))
    return Channel(d_in, d_out, choi, label=label)


def random_eb_channel(d_in: int, d_out: int, seed: Seed = None) -> Channel:
    """Random measure-and-prepare channel (Haar basis, random mixed outputs)."""
    rng = as_generator(seed)
    U = random_unitary(d_in, rng)
    states = [random_state(d_out, seed=rng) for _ in range(d_in)]
    return measure_prepare_channel(U, states, label=f'random-eb({d_in},{d_out})')
