# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""
Dense complex linear algebra and the Schatten-norm layer.

Matrices are plain `numpy.ndarray` objects of dtype complex128. Every public
function validates its inputs (finite entries, compatible shapes) and returns
new arrays; nothing here mutates its arguments.
"""


# type annotations
from __future__ import annotations
from typing import Tuple, Union, Optional, NamedTuple, Final

# standard libs
import math
import functools
from dataclasses import dataclass

# external libs
import numpy as np
from numpy.random import Generator, SeedSequence
from scipy import linalg

# internal libs
from moplab.core.config import config
from moplab.core.logging import Logger
from moplab.core.exceptions import InputError, DimensionError, NotPositiveError

# public interface
__all__ = ['ComplexMatrix', 'Seed', 'SchattenOrder', 'PsdCheck', 'SqrtFactorization',
           'as_matrix', 'as_generator', 'maxabs', 'check_order', 'schatten_norm', 'entropy',
           'partial_trace_first', 'partial_transpose', 'kron', 'is_hermitian', 'hermitian_part',
           'psd_project_check', 'psd_power', 'psd_sqrt', 'matrix_abs', 'sqrt_factorization',
           'canonical_phase', 'ginibre', 'random_unitary', 'encode_matrix', 'decode_matrix', ]

# initialize logger
log = Logger.with_name(__name__)


ComplexMatrix = np.ndarray
Seed = Union[int, SeedSequence, Generator, None]

INF: Final[float] = math.inf


def psd_tol() -> float:
    return float(config.numerics.psd_tol)


def hermitian_tol() -> float:
    return float(config.numerics.hermitian_tol)


def as_matrix(value, name: str = 'matrix') -> ComplexMatrix:
    """Coerce `value` to a finite complex128 2-D array."""
    try:
        array = np.array(value, dtype=np.complex128)
    except (TypeError, ValueError) as error:
        raise InputError(f'Could not interpret {name} as a complex matrix: {error}') from error
    if array.ndim == 0:
        array = array.reshape(1, 1)
    if array.ndim != 2:
        raise InputError(f'Expected two-dimensional {name}, found shape {array.shape}')
    if not np.all(np.isfinite(array)):
        raise InputError(f'Non-finite entries in {name}')
    return array


def as_generator(seed: Seed = None) -> Generator:
    """Normalize an integer, seed sequence, or generator into a `numpy.random.Generator`."""
    if isinstance(seed, Generator):
        return seed
    return np.random.default_rng(seed)


def maxabs(A: ComplexMatrix) -> float:
    """Largest entry modulus (zero for empty matrices)."""
    return float(np.max(np.abs(A))) if A.size else 0.0


@dataclass(frozen=True, eq=False)
class SchattenOrder:
    """Validated exponent for a Schatten norm; `quasi` marks the 1/2 <= q < 1 regime."""

    q: float

    @property
    def is_infinite(self: SchattenOrder) -> bool:
        return math.isinf(self.q)

    @property
    def quasi(self: SchattenOrder) -> bool:
        return self.q < 1

    def __str__(self: SchattenOrder) -> str:
        return 'inf' if self.is_infinite else f'{self.q:g}'


def check_order(q: Union[float, SchattenOrder]) -> SchattenOrder:
    """Validate `q` as a Schatten order (q >= 1/2 or infinity)."""
    if isinstance(q, SchattenOrder):
        return q
    try:
        q = float(q)
    except (TypeError, ValueError) as error:
        raise InputError(f'Invalid Schatten order: {q!r}') from error
    if math.isnan(q) or q < 0.5:
        raise InputError(f'Schatten order must satisfy q >= 1/2 or q = inf (given {q})')
    return SchattenOrder(q)


def _power_sum_norm(values: np.ndarray, q: float) -> float:
    """(sum v^q)^(1/q) for non-negative `values`, scaled to avoid overflow."""
    if values.size == 0:
        return 0.0
    top = float(np.max(values))
    if top <= 0.0:
        return 0.0
    if math.isinf(q):
        return top
    ratio = values / top
    return top * float(np.sum(ratio ** q)) ** (1.0 / q)


def schatten_norm(A, q: Union[float, SchattenOrder]) -> float:
    """
    Schatten q-norm (sum of singular values to the q, to the 1/q).

    Hermitian inputs (within the configured tolerance) use eigenvalue moduli;
    all others use singular values. For q = inf this is the operator norm and
    for 1/2 <= q < 1 it is the corresponding quasi-norm.
    """
    A = as_matrix(A)
    order = check_order(q)
    if A.shape[0] == A.shape[1] and is_hermitian(A):
        values = np.abs(np.linalg.eigvalsh(hermitian_part(A)))
    else:
        values = linalg.svdvals(A)
    return _power_sum_norm(values, order.q)


def entropy(A) -> float:
    """Von Neumann entropy -sum(l log l) of a PSD matrix (natural log, 0 log 0 = 0)."""
    A = as_matrix(A)
    if not is_hermitian(A, tol=1e-10):
        raise InputError('Entropy requires a Hermitian matrix')
    values = np.linalg.eigvalsh(hermitian_part(A))
    trace = float(np.sum(values))
    if trace <= 0:
        raise InputError(f'Entropy requires positive trace (given {trace:g})')
    smallest = float(np.min(values))
    if smallest < -psd_tol() * trace:
        raise NotPositiveError(f'Entropy requires a PSD matrix (eigenvalue {smallest:.3e})', smallest)
    values = values[values > 0]
    return float(-np.sum(values * np.log(values)))


def _split_dims(M: ComplexMatrix, dims: Tuple[int, int]) -> Tuple[int, int]:
    d1, d2 = (int(d) for d in dims)
    if d1 < 1 or d2 < 1 or M.shape != (d1 * d2, d1 * d2):
        raise DimensionError(f'Matrix of shape {M.shape} does not match dims {(d1, d2)}')
    return d1, d2


def partial_trace_first(M, dims: Tuple[int, int]) -> ComplexMatrix:
    """Trace out the first tensor factor of a (d1*d2)x(d1*d2) matrix."""
    M = as_matrix(M)
    d1, d2 = _split_dims(M, dims)
    return np.einsum('iaib->ab', M.reshape(d1, d2, d1, d2))


def partial_transpose(M, dims: Tuple[int, int], system: int = 1) -> ComplexMatrix:
    """Transpose the chosen tensor factor (0 for the first, 1 for the second)."""
    M = as_matrix(M)
    d1, d2 = _split_dims(M, dims)
    if system not in (0, 1):
        raise InputError(f'Partial transpose system must be 0 or 1 (given {system})')
    axes = (2, 1, 0, 3) if system == 0 else (0, 3, 2, 1)
    return M.reshape(d1, d2, d1, d2).transpose(axes).reshape(d1 * d2, d1 * d2)


def kron(*matrices) -> ComplexMatrix:
    """Kronecker product; block (i, j) of kron(A, B) equals A[i, j] * B."""
    if not matrices:
        raise InputError('Kronecker product of nothing')
    return functools.reduce(np.kron, (as_matrix(M) for M in matrices))


def is_hermitian(A, tol: Optional[float] = None) -> bool:
    """True when max |A - A*| <= tol * (1 + maxabs(A))."""
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        return False
    tol = hermitian_tol() if tol is None else tol
    return maxabs(A - A.conj().T) <= tol * (1 + maxabs(A))


def hermitian_part(A) -> ComplexMatrix:
    A = as_matrix(A)
    return (A + A.conj().T) / 2


class PsdCheck(NamedTuple):
    is_psd: bool
    min_eigenvalue: float


def psd_project_check(A, tol: Optional[float] = None) -> PsdCheck:
    """Positive-semidefiniteness within tol * (1 + maxabs(A))."""
    A = as_matrix(A)
    if not is_hermitian(A, tol=1e-10):
        raise InputError(f'PSD check requires a Hermitian matrix (shape {A.shape})')
    tol = psd_tol() if tol is None else tol
    smallest = float(np.min(np.linalg.eigvalsh(hermitian_part(A)))) if A.size else 0.0
    return PsdCheck(smallest >= -tol * (1 + maxabs(A)), smallest)


def _psd_eigh(A: ComplexMatrix, name: str) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a PSD matrix with small negative eigenvalues clamped to zero."""
    if not is_hermitian(A, tol=1e-10):
        raise InputError(f'Expected Hermitian {name}')
    values, vectors = np.linalg.eigh(hermitian_part(A))
    if values.size and values[0] < -psd_tol() * (1 + maxabs(A)):
        raise NotPositiveError(f'Expected PSD {name} (eigenvalue {values[0]:.3e})', float(values[0]))
    return np.clip(values, 0.0, None), vectors


def psd_power(A, p: float, name: str = 'matrix') -> ComplexMatrix:
    """Matrix power A^p of a PSD matrix through its eigen-decomposition."""
    A = as_matrix(A, name)
    values, vectors = _psd_eigh(A, name)
    if p == 0:
        powered = (values > 0).astype(float)
    elif p < 0:
        if np.any(values <= 0):
            raise NotPositiveError(f'Negative power of singular {name}', float(np.min(values)))
        powered = values ** p
    else:
        powered = values ** p
    return (vectors * powered) @ vectors.conj().T


def psd_sqrt(A) -> ComplexMatrix:
    """Hermitian PSD square root."""
    return psd_power(A, 0.5)


def matrix_abs(A) -> ComplexMatrix:
    """|A| = (A*A)^(1/2)."""
    A = as_matrix(A)
    return psd_power(A.conj().T @ A, 0.5)


def canonical_phase(vector: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate global phase so the first non-negligible component is real positive."""
    vector = np.asarray(vector, dtype=np.complex128)
    scale = float(np.max(np.abs(vector))) if vector.size else 0.0
    if scale == 0.0:
        return vector.copy()
    index = int(np.argmax(np.abs(vector) > tol * scale))
    phase = vector[index] / abs(vector[index])
    return vector / phase


@dataclass(frozen=True, eq=False)
class SqrtFactorization:
    """Gram factor X with X*X = M, split into equal column blocks X_1, ..., X_n."""

    factors: Tuple[ComplexMatrix, ...]
    eigenvalues: np.ndarray

    @property
    def rank(self: SqrtFactorization) -> int:
        return self.factors[0].shape[0]

    @property
    def full(self: SqrtFactorization) -> ComplexMatrix:
        return np.hstack(self.factors)

    def block(self: SqrtFactorization, i: int, j: int) -> ComplexMatrix:
        """Reconstructed block X_i* X_j."""
        return self.factors[i].conj().T @ self.factors[j]


def sqrt_factorization(M, blocks: int = 2, tol: Optional[float] = None) -> SqrtFactorization:
    """
    Canonical Gram factorization of a PSD matrix.

    Eigenvalues are taken in descending order and those at or below
    tol * Tr(M) are dropped; each eigenvector is phase-fixed with
    `canonical_phase`. The rows of X are sqrt(l_k) v_k*, so X*X = M.
    """
    M = as_matrix(M)
    if M.shape[0] != M.shape[1] or M.shape[0] % blocks:
        raise DimensionError(f'Matrix of shape {M.shape} cannot be split into {blocks} blocks')
    values, vectors = _psd_eigh(M, 'matrix for factorization')
    order = np.argsort(values)[::-1]
    values, vectors = values[order], vectors[:, order]
    tol = float(config.numerics.kraus_tol) if tol is None else tol
    trace = float(np.sum(values))
    keep = values > tol * trace if trace > 0 else np.zeros_like(values, dtype=bool)
    if not np.any(keep):
        keep[0] = True  # zero matrix factors through a single zero row
    rows = [math.sqrt(value) * canonical_phase(vectors[:, k]).conj()
            for k, value in enumerate(values) if keep[k]]
    X = np.vstack(rows)
    size = M.shape[0] // blocks
    factors = tuple(X[:, i * size:(i + 1) * size].copy() for i in range(blocks))
    return SqrtFactorization(factors=factors, eigenvalues=values[keep])


def ginibre(rows: int, cols: int, seed: Seed = None) -> ComplexMatrix:
    """Standard complex Gaussian matrix (unit variance entries)."""
    rng = as_generator(seed)
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2)


def random_unitary(d: int, seed: Seed = None) -> ComplexMatrix:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    Q, R = np.linalg.qr(ginibre(d, d, seed))
    diagonal = np.diag(R)
    return Q * (diagonal / np.abs(diagonal))


def encode_matrix(A) -> dict:
    """Interchange document: rows, cols, and row-major [re, im] pairs."""
    A = as_matrix(A)
    return {
        'rows': int(A.shape[0]),
        'cols': int(A.shape[1]),
        'entries': [[float(z.real), float(z.imag)] for z in A.reshape(-1)],
    }


def decode_matrix(data: dict, name: str = 'matrix') -> ComplexMatrix:
    """Inverse of `encode_matrix`; validates the declared shape against the entry count."""
    try:
        rows, cols, entries = int(data['rows']), int(data['cols']), data['entries']
    except (KeyError, TypeError, ValueError) as error:
        raise InputError(f'Malformed {name} document: {error}') from error
    if rows < 0 or cols < 0 or len(entries) != rows * cols:
        raise InputError(f'Malformed {name} document: expected {rows}x{cols} entries, found {len(entries)}')
    try:
        values = np.array([complex(float(re), float(im)) for re, im in entries], dtype=np.complex128)
    except (TypeError, ValueError) as error:
        raise InputError(f'Malformed {name} entries: {error}') from error
    return as_matrix(values.reshape(rows, cols), name)
