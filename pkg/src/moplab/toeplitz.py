# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""
Finite positive decompositions of block-Toeplitz states.

A PSD matrix [[B, C], [C*, B]] with B invertible is written as a finite sum
of products [[1, e^{it}], [e^{-it}, 1]] (x) P_k with P_k PSD. Construction is
supported when the whitened block T = B^(-1/2) C B^(-1/2) is normal: every
eigenvalue of T lies in the closed unit disk and is split into at most two
points on the unit circle that share its argument.
"""


# type annotations
from __future__ import annotations
from typing import List, Tuple, Dict, Any, Optional

# standard libs
import math
from dataclasses import dataclass

# external libs
import numpy as np
from scipy import linalg

# internal libs
from moplab.core.config import config
from moplab.core.logging import Logger
from moplab.core.exceptions import (InputError, DimensionError, NotPositiveError,
                                    SingularBlockError, UnsupportedDecomposition)
from moplab.matcore import (ComplexMatrix, as_matrix, maxabs, psd_tol, psd_power, psd_project_check,
                            kron, encode_matrix, decode_matrix)
from moplab.report import CheckReport

# public interface
__all__ = ['ToeplitzDecomposition', 'decompose_block_toeplitz', 'verify_decomposition', 'phase_matrix', ]

# initialize logger
log = Logger.with_name(__name__)


TWO_PI: float = 2 * math.pi

# Angles closer than this are merged into a single term
ANGLE_TOL: float = 1e-12

# Eigenvalue moduli within this distance of 1 need only one circle point
MODULUS_TOL: float = 1e-12


def phase_matrix(theta: float) -> ComplexMatrix:
    """The 2x2 rank-one matrix [[1, e^{it}], [e^{-it}, 1]]."""
    z = complex(math.cos(theta), math.sin(theta))
    return np.array([[1, z], [z.conjugate(), 1]], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class ToeplitzDecomposition:
    """Terms (theta_k, P_k) with angles sorted in [0, 2 pi)."""

    terms: Tuple[Tuple[float, ComplexMatrix], ...]

    @property
    def count(self: ToeplitzDecomposition) -> int:
        return len(self.terms)

    @property
    def thetas(self: ToeplitzDecomposition) -> List[float]:
        return [theta for theta, _ in self.terms]

    @property
    def blocks(self: ToeplitzDecomposition) -> List[ComplexMatrix]:
        return [P for _, P in self.terms]

    def diagonal_sum(self: ToeplitzDecomposition, d: int) -> ComplexMatrix:
        """Sum of P_k (equals B)."""
        return sum((P for _, P in self.terms), np.zeros((d, d), dtype=np.complex128))

    def phase_sum(self: ToeplitzDecomposition, d: int) -> ComplexMatrix:
        """Sum of e^{i theta_k} P_k (equals C)."""
        return sum((np.exp(1j * theta) * P for theta, P in self.terms), np.zeros((d, d), dtype=np.complex128))

    def reassemble(self: ToeplitzDecomposition) -> ComplexMatrix:
        """Sum of [[1, e^{it}], [e^{-it}, 1]] (x) P_k."""
        if not self.terms:
            raise InputError('Cannot reassemble an empty decomposition')
        return sum(kron(phase_matrix(theta), P) for theta, P in self.terms)

    def to_json(self: ToeplitzDecomposition) -> Dict[str, Any]:
        return {
            'kind': 'toeplitz-decomposition',
            'count': self.count,
            'terms': [{'theta': theta, 'P': encode_matrix(P)} for theta, P in self.terms],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> ToeplitzDecomposition:
        if data.get('kind') != 'toeplitz-decomposition':
            raise InputError(f'Expected toeplitz-decomposition document (found kind={data.get("kind")!r})')
        try:
            return cls(tuple((float(term['theta']), decode_matrix(term['P'], 'P'))
                             for term in data['terms']))
        except (KeyError, TypeError) as error:
            raise InputError(f'Malformed decomposition document: {error}') from error


def _check_blocks(B, C) -> Tuple[ComplexMatrix, ComplexMatrix]:
    B, C = as_matrix(B, 'B'), as_matrix(C, 'C')
    if B.shape[0] != B.shape[1] or C.shape != B.shape:
        raise DimensionError(f'Blocks B {B.shape} and C {C.shape} must be square and equal in shape')
    return B, C


def _circle_points(value: complex) -> List[Tuple[float, float]]:
    """Angles and weights on the unit circle whose weighted average is `value`."""
    radius = abs(value)
    if radius >= 1 - MODULUS_TOL:
        return [(math.atan2(value.imag, value.real), 1.0)]
    if radius <= MODULUS_TOL:
        angle, spread = math.pi / 2, math.pi / 2  # yields the pair {0, pi}
    else:
        angle, spread = math.atan2(value.imag, value.real), math.acos(radius)
    return [(angle - spread, 0.5), (angle + spread, 0.5)]


def _merge(terms: List[Tuple[float, ComplexMatrix]]) -> List[Tuple[float, ComplexMatrix]]:
    """Wrap angles into [0, 2 pi), sort, and sum the blocks of coinciding angles."""
    wrapped = []
    for theta, P in terms:
        theta = theta % TWO_PI
        wrapped.append((0.0 if TWO_PI - theta <= ANGLE_TOL else theta, P))
    merged: List[Tuple[float, ComplexMatrix]] = []
    for theta, P in sorted(wrapped, key=lambda term: term[0]):
        if merged and abs(merged[-1][0] - theta) <= ANGLE_TOL:
            merged[-1] = (merged[-1][0], merged[-1][1] + P)
        else:
            merged.append((theta, P))
    return merged


def decompose_block_toeplitz(B, C, normal_tol: Optional[float] = None) -> ToeplitzDecomposition:
    """
    Construct (theta_k, P_k) with sum P_k = B and sum e^{i theta_k} P_k = C.

    Raises SingularBlockError when B is not invertible within tolerance and
    UnsupportedDecomposition when the whitened block is not normal.
    """
    B, C = _check_blocks(B, C)
    normal_tol = float(config.toeplitz.normal_tol) if normal_tol is None else normal_tol
    full = np.block([[B, C], [C.conj().T, B]])
    check = psd_project_check(full)
    if not check.is_psd:
        raise NotPositiveError(f'Block-Toeplitz matrix is not PSD (eigenvalue {check.min_eigenvalue:.3e})',
                               check.min_eigenvalue)
    smallest = float(np.min(np.linalg.eigvalsh((B + B.conj().T) / 2)))
    if smallest <= psd_tol() * (1 + maxabs(B)):
        raise SingularBlockError(f'Diagonal block is singular (eigenvalue {smallest:.3e}); '
                                 f'regularize or reject', smallest)
    root, inverse_root = psd_power(B, 0.5, 'B'), psd_power(B, -0.5, 'B')
    T = inverse_root @ C @ inverse_root
    defect = maxabs(T @ T.conj().T - T.conj().T @ T)
    if defect > normal_tol * (1 + maxabs(T) ** 2):
        raise UnsupportedDecomposition(f'Whitened block is not normal (commutator {defect:.3e}); '
                                       f'only normal contractions are decomposed')
    schur_form, vectors = linalg.schur(T, output='complex')
    terms = []
    for k, value in enumerate(np.diag(schur_form)):
        u = vectors[:, [k]]
        projector = root @ (u @ u.conj().T) @ root
        for theta, weight in _circle_points(complex(value)):
            terms.append((theta, weight * projector))
    merged = _merge(terms)
    log.debug(f'Decomposed {B.shape[0]}x{B.shape[0]} block-Toeplitz matrix into {len(merged)} terms')
    return ToeplitzDecomposition(tuple(merged))


def verify_decomposition(dec: ToeplitzDecomposition, B, C, tol: Optional[float] = None) -> CheckReport:
    """
    Check reconstruction residuals and per-term positivity.

    The report compares the largest relative residual (lhs) against the
    tolerance (rhs); every invariant is recorded as a named condition.
    """
    B, C = _check_blocks(B, C)
    tol = float(config.toeplitz.tol) if tol is None else tol
    d = B.shape[0]
    residual_b = maxabs(dec.diagonal_sum(d) - B) / (1 + maxabs(B))
    residual_c = maxabs(dec.phase_sum(d) - C) / (1 + maxabs(C))
    checks = [psd_project_check(P) for P in dec.blocks]
    smallest = min((check.min_eigenvalue for check in checks), default=0.0)
    conditions = {
        'nonempty': dec.count > 0 or maxabs(B) == 0,
        'sum_P_equals_B': residual_b <= tol,
        'phase_sum_equals_C': residual_c <= tol,
        'P_k_psd': all(check.is_psd for check in checks),
    }
    return CheckReport.build('toeplitz-decomposition', lhs=max(residual_b, residual_c), rhs=tol, tol=0.0,
                             params={'d': d, 'count': dec.count, 'residual_B': residual_b,
                                     'residual_C': residual_c, 'min_P_eigenvalue': smallest},
                             inputs={'B': B, 'C': C, 'thetas': dec.thetas, 'P': dec.blocks},
                             conditions=conditions)
