# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""
Checkers for output-purity inequalities on qubit-input maps.

Every checker evaluates both sides of an inequality lhs <= rhs for concrete
inputs and returns a `CheckReport`. Inputs are recorded as the witness when
the comparison fails, keyed by the checker's own argument names so that a
failed report can be replayed through the `CHECKERS` registry.
"""


# type annotations
from __future__ import annotations
from typing import Dict, Tuple, Any, Callable, Optional, Sequence, Union, NamedTuple

# standard libs
import math
import functools
from dataclasses import dataclass

# external libs
import numpy as np
from numpy.random import Generator
from scipy import optimize

# internal libs
from moplab.core.config import config
from moplab.core.logging import Logger
from moplab.core.exceptions import InputError, DimensionError, NotPositiveError, NoRootFound, UnknownChecker
from moplab.matcore import (ComplexMatrix, SchattenOrder, check_order, schatten_norm, as_matrix, maxabs,
                            is_hermitian, psd_project_check, psd_power, kron, ginibre, sqrt_factorization,
                            partial_trace_first)
from moplab.channels import (Channel, BipartiteBlockState, apply, apply_tensor_id, choi_from_kraus,
                             channel_from_factors, is_entanglement_breaking, is_unital, random_cp_map,
                             random_bipartite_state, random_pure_state, random_linear_map,
                             random_toeplitz_state, separable_components, random_eb_channel)
from moplab.mop import MopOptions, nu_q, nu_q_tensor
from moplab.report import CheckReport
from moplab.data.model import to_json_type
from moplab.toeplitz import ToeplitzDecomposition, decompose_block_toeplitz, verify_decomposition

# public interface
__all__ = ['Case3Maximum', 'rhs_case3', 'theta_objective',
           'check_chris0', 'check_case3', 'check_case3_sqrt', 'check_chris0_sqrt',
           'check_alt', 'check_positive_tensor', 'check_blockwise', 'check_psd_phase_sqrt',
           'check_separable_bound', 'check_multiplicativity_eb', 'check_toeplitz_theorem',
           'check_delta_bound', 'check_identity_theorem', 'check_single_kraus',
           'check_cauchy_schwarz', 'check_case3_implies_chris0', 'check_toeplitz_decomposition',
           'CounterexampleFamily', 'counterexample_f', 'p0_of_b',
           'Checker', 'CHECKERS', 'get_checker', ]

# initialize logger
log = Logger.with_name(__name__)


# Below this the counterexample family degenerates (no root above 2)
MIN_FAMILY_B: float = 1e-6

# Root location precision for the counterexample exponent
ROOT_XTOL: float = 1e-12

Order = Union[float, SchattenOrder]


def _tol(tol: Optional[float]) -> float:
    return float(config.check.tol) if tol is None else float(tol)


def _q_param(order: SchattenOrder) -> Any:
    return to_json_type(order.q)


def _as_state(rho: Union[BipartiteBlockState, ComplexMatrix]) -> BipartiteBlockState:
    return rho if isinstance(rho, BipartiteBlockState) else BipartiteBlockState.from_matrix(rho)


def _require_qubit_input(ch: Channel, operation: str) -> None:
    if ch.d_in != 2:
        raise DimensionError(f'{operation} requires a map with two-dimensional input (given d_in={ch.d_in})')


def _require_psd(A: ComplexMatrix, name: str) -> None:
    if not is_hermitian(A, tol=1e-10):
        raise InputError(f'{name} must be Hermitian')
    check = psd_project_check(A)
    if not check.is_psd:
        raise NotPositiveError(f'{name} is not PSD (eigenvalue {check.min_eigenvalue:.3e})', check.min_eigenvalue)


def _require_norm_regime(order: SchattenOrder, operation: str) -> None:
    if order.quasi:
        raise InputError(f'{operation} requires q >= 1 (given {order})')


class Case3Maximum(NamedTuple):
    """Maximum over the phase angle with its maximizer and the evaluation method."""
    value: float
    theta_star: float
    method: str


def theta_objective(ch: Channel, beta: float, delta: float, q: Order) -> Callable[[float], float]:
    """theta -> ||beta P11 + delta P22 + e^{it} r P21 + e^{-it} r P12||_q with r = sqrt(beta delta)."""
    order = check_order(q)
    base = beta * ch.block(0, 0) + delta * ch.block(1, 1)
    r = math.sqrt(beta * delta)
    lower, upper = r * ch.block(1, 0), r * ch.block(0, 1)

    def objective(theta: float) -> float:
        phase = complex(math.cos(theta), math.sin(theta))
        return schatten_norm(base + phase * lower + phase.conjugate() * upper, order)

    return objective


def rhs_case3(ch: Channel, beta: float, delta: float, q: Order,
              theta_grid: Optional[int] = None, theta_tol: Optional[float] = None) -> Case3Maximum:
    """
    Maximize the phase-angle bound for a map with qubit input.

    When the off-diagonal block is Hermitian and both off-diagonal blocks
    agree, the matrix depends on theta only through cos(theta) and the norm
    is convex in it, so the extreme points theta in {0, pi} suffice (q >= 1).
    Otherwise a uniform grid is scanned and its best point refined by a
    bounded scalar search.
    """
    _require_qubit_input(ch, 'Phase-angle maximization')
    order = check_order(q)
    beta, delta = float(beta), float(delta)
    if beta < 0 or delta < 0 or not (math.isfinite(beta) and math.isfinite(delta)):
        raise InputError(f'Expected finite non-negative weights (given beta={beta}, delta={delta})')
    objective = theta_objective(ch, beta, delta, order)
    if beta == 0 or delta == 0:
        return Case3Maximum(objective(0.0), 0.0, 'degenerate')
    upper, lower = ch.block(0, 1), ch.block(1, 0)
    if (not order.quasi and is_hermitian(upper)
            and maxabs(upper - lower) <= 1e-12 * (1 + maxabs(upper))):
        candidates = [(objective(0.0), 0.0), (objective(math.pi), math.pi)]
        value, theta = max(candidates, key=lambda item: item[0])
        return Case3Maximum(value, theta, 'extreme-points')
    count = int(config.check.theta_grid) if theta_grid is None else int(theta_grid)
    xatol = float(config.check.theta_tol) if theta_tol is None else float(theta_tol)
    grid = np.linspace(0, 2 * math.pi, count, endpoint=False)
    values = np.array([objective(theta) for theta in grid])
    best = int(np.argmax(values))
    value, theta = float(values[best]), float(grid[best])
    step = 2 * math.pi / count
    polish = optimize.minimize_scalar(lambda t: -objective(t), bounds=(theta - step, theta + step),
                                      method='bounded', options={'xatol': xatol})
    if polish.success and -polish.fun > value:
        value, theta = float(-polish.fun), float(polish.x % (2 * math.pi))
    log.trace(f'Phase maximum {value:.12g} at theta={theta:.6f} ({count} grid points)')
    return Case3Maximum(value, theta, 'grid')


def _output_norm(ch: Channel, rho: BipartiteBlockState, order: SchattenOrder) -> float:
    return schatten_norm(apply_tensor_id(ch, rho), order)


def _nu(ch: Channel, order: SchattenOrder, opts: Optional[MopOptions], nu: Optional[float]) -> Tuple[float, bool]:
    if nu is not None:
        return float(nu), False
    result = nu_q(ch, order, opts)
    return result.value, result.heuristic


def check_chris0(ch: Channel, rho: Union[BipartiteBlockState, ComplexMatrix], q: Order,
                 opts: Optional[MopOptions] = None, tol: Optional[float] = None,
                 nu: Optional[float] = None) -> CheckReport:
    """||(P (x) 1)(rho)||_q <= nu_q(P) (||B||_q + ||D||_q)."""
    _require_qubit_input(ch, 'check_chris0')
    ch.require_cp('check_chris0')
    rho, order = _as_state(rho), check_order(q)
    beta, delta = schatten_norm(rho.B, order), schatten_norm(rho.D, order)
    value, heuristic = _nu(ch, order, opts, nu)
    notes = ['nu_q is an optimizer lower bound'] if nu is None else []
    return CheckReport.build('chris0', lhs=_output_norm(ch, rho, order), rhs=value * (beta + delta), tol=_tol(tol),
                             params={'q': _q_param(order), 'd': rho.d, 'beta': beta, 'delta': delta,
                                     'nu': value, 'heuristic': heuristic, 'quasi': order.quasi},
                             inputs={'ch': ch, 'rho': rho}, notes=notes)


def check_case3(ch: Channel, rho: Union[BipartiteBlockState, ComplexMatrix], q: Order,
                tol: Optional[float] = None) -> CheckReport:
    """||(P (x) 1)(rho)||_q <= max over theta of the phase-angle bound at (||B||_q, ||D||_q)."""
    _require_qubit_input(ch, 'check_case3')
    ch.require_cp('check_case3')
    rho, order = _as_state(rho), check_order(q)
    beta, delta = schatten_norm(rho.B, order), schatten_norm(rho.D, order)
    maximum = rhs_case3(ch, beta, delta, order)
    report = CheckReport.build('case3', lhs=_output_norm(ch, rho, order), rhs=maximum.value, tol=_tol(tol),
                               params={'q': _q_param(order), 'd': rho.d, 'beta': beta, 'delta': delta,
                                       'theta_star': maximum.theta_star, 'method': maximum.method,
                                       'quasi': order.quasi},
                               inputs={'ch': ch, 'rho': rho})
    if not report.holds:
        report.notes.append('conjecture-violating witness')
    return report


def _sqrt_terms(G1, G2, X1, X2) -> Tuple[ComplexMatrix, ...]:
    G1, G2, X1, X2 = (as_matrix(M, name) for M, name in ((G1, 'G1'), (G2, 'G2'), (X1, 'X1'), (X2, 'X2')))
    if G1.shape != G2.shape or X1.shape != X2.shape:
        raise DimensionError('Factor blocks must agree in shape pairwise (G1 with G2, X1 with X2)')
    return G1, G2, X1, X2


def _case3_sqrt(name: str, G1, G2, X1, X2, order: SchattenOrder, tol: Optional[float],
                inputs: Dict[str, Any], params: Dict[str, Any] = None) -> CheckReport:
    G1, G2, X1, X2 = _sqrt_terms(G1, G2, X1, X2)
    double = check_order(2 * order.q)
    lhs = schatten_norm(kron(G1, X1) + kron(G2, X2), double)
    n1, n2 = schatten_norm(X1, double), schatten_norm(X2, double)
    maximum = rhs_case3(channel_from_factors([G1, G2]), n1 ** 2, n2 ** 2, order)
    report = CheckReport.build(name, lhs=lhs, rhs=math.sqrt(max(maximum.value, 0.0)), tol=_tol(tol),
                               params={'q': _q_param(order), 'norm_X1': n1, 'norm_X2': n2,
                                       'theta_star': maximum.theta_star, 'method': maximum.method,
                                       'quasi': order.quasi, **(params or {})},
                               inputs=inputs)
    if not report.holds:
        report.notes.append('conjecture-violating witness')
    return report


def check_case3_sqrt(G1, G2, X1, X2, q: Order, tol: Optional[float] = None) -> CheckReport:
    """||G1 (x) X1 + G2 (x) X2||_2q <= max over theta of ||G1 ||X1||_2q + e^{it} G2 ||X2||_2q||_2q."""
    return _case3_sqrt('case3-sqrt', G1, G2, X1, X2, check_order(q), tol,
                       inputs={'G1': G1, 'G2': G2, 'X1': X1, 'X2': X2})


def check_chris0_sqrt(G1, G2, X1, X2, q: Order, opts: Optional[MopOptions] = None,
                      tol: Optional[float] = None, nu: Optional[float] = None) -> CheckReport:
    """||G1 (x) X1 + G2 (x) X2||_2q <= sqrt(nu_q(G*G)) sqrt(||X1||_2q^2 + ||X2||_2q^2)."""
    G1, G2, X1, X2 = _sqrt_terms(G1, G2, X1, X2)
    order = check_order(q)
    double = check_order(2 * order.q)
    lhs = schatten_norm(kron(G1, X1) + kron(G2, X2), double)
    n1, n2 = schatten_norm(X1, double), schatten_norm(X2, double)
    value, heuristic = _nu(channel_from_factors([G1, G2]), order, opts, nu)
    return CheckReport.build('chris0-sqrt', lhs=lhs, rhs=math.sqrt(value) * math.sqrt(n1 ** 2 + n2 ** 2),
                             tol=_tol(tol), params={'q': _q_param(order), 'nu': value, 'norm_X1': n1,
                                                    'norm_X2': n2, 'heuristic': heuristic},
                             inputs={'G1': G1, 'G2': G2, 'X1': X1, 'X2': X2})


def check_alt(F, H, q: Order, tol: Optional[float] = None) -> CheckReport:
    """Tr|F H F*|^q <= Re Tr[(F*F)^q (|H|^q + |H*|^q) / 2] for q >= 1."""
    F, H = as_matrix(F, 'F'), as_matrix(H, 'H')
    order = check_order(q)
    _require_norm_regime(order, 'check_alt')
    if order.is_infinite:
        raise InputError('check_alt requires finite q')
    if H.shape[0] != H.shape[1] or F.shape[1] != H.shape[0]:
        raise DimensionError(f'Incompatible shapes for F H F*: F {F.shape}, H {H.shape}')
    p = order.q
    lhs = schatten_norm(F @ H @ F.conj().T, order) ** p
    gram = psd_power(F.conj().T @ F, p, 'F*F')
    modulus = (psd_power(H.conj().T @ H, p / 2, 'H*H') + psd_power(H @ H.conj().T, p / 2, 'HH*')) / 2
    rhs = float(np.trace(gram @ modulus).real)
    return CheckReport.build('alt', lhs=lhs, rhs=rhs, tol=_tol(tol),
                             params={'q': _q_param(order), 'normal': maxabs(H @ H.conj().T - H.conj().T @ H) <= 1e-12},
                             inputs={'F': F, 'H': H})


def check_positive_tensor(A_list: Sequence[ComplexMatrix], B_list: Sequence[ComplexMatrix], q: Order,
                          tol: Optional[float] = None) -> CheckReport:
    """
    ||sum A_k (x) B_k||_q <= ||sum ||B_k||_q A_k||_q <= ||sum A_k||_q max ||B_j||_q for PSD A_k.

    The report compares the outer pair; both links of the chain are
    recorded as conditions.
    """
    A_list = [as_matrix(A, 'A_k') for A in A_list]
    B_list = [as_matrix(B, 'B_k') for B in B_list]
    if not A_list or len(A_list) != len(B_list):
        raise InputError(f'Expected equal, nonzero counts (given {len(A_list)} and {len(B_list)})')
    if any(A.shape != A_list[0].shape for A in A_list) or any(B.shape != B_list[0].shape for B in B_list):
        raise DimensionError('Matrices within each list must share one shape')
    for k, A in enumerate(A_list):
        _require_psd(A, f'A_{k}')
    order = check_order(q)
    tol = _tol(tol)
    lhs = schatten_norm(sum(kron(A, B) for A, B in zip(A_list, B_list)), order)
    norms = [schatten_norm(B, order) for B in B_list]
    weighted = schatten_norm(sum(n * A for n, A in zip(norms, A_list)), order)
    rhs = schatten_norm(sum(A_list), order) * max(norms)
    return CheckReport.build('positive-tensor', lhs=lhs, rhs=rhs, tol=tol,
                             params={'q': _q_param(order), 'weighted': weighted, 'count': len(A_list)},
                             conditions={'lhs_le_weighted': weighted - lhs >= -tol * (1 + abs(weighted)),
                                         'weighted_le_rhs': rhs - weighted >= -tol * (1 + abs(rhs))},
                             inputs={'A_list': A_list, 'B_list': B_list})


def check_blockwise(ch: Channel, X, q: Order, tol: Optional[float] = None) -> CheckReport:
    """||(P (x) 1)(X)||_q <= ||P([||X_ij||_q])||_q when every block P_ij is PSD."""
    order = check_order(q)
    for i in range(ch.d_in):
        for j in range(ch.d_in):
            _require_psd(ch.block(i, j), f'Block ({i}, {j})')
    X = as_matrix(X, 'X')
    if X.shape[0] != X.shape[1] or X.shape[0] % ch.d_in:
        raise DimensionError(f'Block matrix of shape {X.shape} for map with d_in={ch.d_in}')
    d = X.shape[0] // ch.d_in
    X4 = X.reshape(ch.d_in, d, ch.d_in, d)
    norms = np.array([[schatten_norm(X4[i, :, j, :], order) for j in range(ch.d_in)] for i in range(ch.d_in)])
    return CheckReport.build('blockwise', lhs=schatten_norm(apply_tensor_id(ch, X), order),
                             rhs=schatten_norm(apply(ch, norms), order), tol=_tol(tol),
                             params={'q': _q_param(order), 'd': d, 'quasi': order.quasi},
                             inputs={'ch': ch, 'X': X})


def check_psd_phase_sqrt(H1, H2, theta1: float, theta2: float, X1, X2, q: Order,
                         tol: Optional[float] = None) -> CheckReport:
    """Square-rooted phase-angle bound for G_i = e^{i theta_i} H_i with H_i PSD (any q >= 1/2)."""
    H1, H2 = as_matrix(H1, 'H1'), as_matrix(H2, 'H2')
    _require_psd(H1, 'H1')
    _require_psd(H2, 'H2')
    theta1, theta2 = float(theta1), float(theta2)
    G1, G2 = np.exp(1j * theta1) * H1, np.exp(1j * theta2) * H2
    return _case3_sqrt('psd-phase-sqrt', G1, G2, X1, X2, check_order(q), tol,
                       inputs={'H1': H1, 'H2': H2, 'theta1': theta1, 'theta2': theta2, 'X1': X1, 'X2': X2},
                       params={'theta1': theta1, 'theta2': theta2})


def check_separable_bound(ch: Channel, components: Sequence[Tuple[ComplexMatrix, ComplexMatrix]], q: Order,
                          opts: Optional[MopOptions] = None, tol: Optional[float] = None,
                          nu: Optional[float] = None) -> CheckReport:
    """||(P (x) 1)(rho)||_q <= nu_q(P) ||Tr_1 rho||_q for rho = sum sigma_k (x) B_k."""
    ch.require_cp('check_separable_bound')
    order = check_order(q)
    if not components:
        raise InputError('Separable state needs at least one component')
    pairs = [(as_matrix(sigma, 'sigma_k'), as_matrix(B, 'B_k')) for sigma, B in components]
    for k, (sigma, B) in enumerate(pairs):
        if sigma.shape != (ch.d_in, ch.d_in):
            raise DimensionError(f'sigma_{k} must be {ch.d_in}x{ch.d_in} (given {sigma.shape})')
        _require_psd(sigma, f'sigma_{k}')
        _require_psd(B, f'B_{k}')
        if abs(np.trace(sigma) - 1) > 1e-10:
            raise InputError(f'sigma_{k} must have unit trace')
    rho = sum(kron(sigma, B) for sigma, B in pairs)
    d = pairs[0][1].shape[0]
    reduced = partial_trace_first(rho, (ch.d_in, d))
    value, heuristic = _nu(ch, order, opts, nu)
    return CheckReport.build('separable-bound', lhs=schatten_norm(apply_tensor_id(ch, rho), order),
                             rhs=value * schatten_norm(reduced, order), tol=_tol(tol),
                             params={'q': _q_param(order), 'nu': value, 'count': len(pairs),
                                     'heuristic': heuristic},
                             inputs={'ch': ch, 'components': [list(pair) for pair in pairs]})


def check_multiplicativity_eb(ch: Channel, eb: Channel, q: Order, opts: Optional[MopOptions] = None,
                              tol: Optional[float] = None) -> CheckReport:
    """
    nu_q(P (x) E) equals nu_q(P) nu_q(E) when E is entanglement breaking.

    Skipped unless E carries an EB certificate. The report compares the
    tensor optimum against the product; two-sided equality is a condition.
    """
    order = check_order(q)
    tol = float(config.check.eb_tol) if tol is None else float(tol)
    certificate = is_entanglement_breaking(eb)
    if not certificate.certified:
        return CheckReport.skipped('multiplicativity-eb', f'no EB certificate ({certificate.status.value}: '
                                                          f'{certificate.certificate})',
                                   params={'q': _q_param(order)})
    result = nu_q_tensor(ch, eb, order, opts)
    product = result.factor_values[0] * result.factor_values[1]
    scale = 1 + abs(product)
    return CheckReport.build('multiplicativity-eb', lhs=result.value, rhs=product, tol=tol,
                             params={'q': _q_param(order), 'nu_ch': result.factor_values[0],
                                     'nu_eb': result.factor_values[1], 'certificate': certificate.certificate,
                                     'heuristic': result.heuristic},
                             conditions={'two_sided': abs(result.value - product) <= tol * scale},
                             inputs={'ch': ch, 'eb': eb})


def check_toeplitz_theorem(ch: Channel, B, C, q: Order, tol: Optional[float] = None) -> CheckReport:
    """||(P (x) 1)(rho)||_q <= phase-angle bound at beta = delta = ||B||_q for rho = [[B, C], [C*, B]]."""
    _require_qubit_input(ch, 'check_toeplitz_theorem')
    if not ch.hermitian:
        raise InputError('check_toeplitz_theorem requires a Hermiticity-preserving map')
    order = check_order(q)
    B, C = as_matrix(B, 'B'), as_matrix(C, 'C')
    if B.shape[0] != B.shape[1] or C.shape != B.shape:
        raise DimensionError(f'Blocks B {B.shape} and C {C.shape} must be square and equal in shape')
    rho = BipartiteBlockState(B, C, B)
    beta = schatten_norm(B, order)
    maximum = rhs_case3(ch, beta, beta, order)
    return CheckReport.build('toeplitz-theorem', lhs=_output_norm(ch, rho, order), rhs=maximum.value, tol=_tol(tol),
                             params={'q': _q_param(order), 'beta': beta, 'theta_star': maximum.theta_star,
                                     'method': maximum.method, 'cp': ch.cp_flag},
                             inputs={'ch': ch, 'B': B, 'C': C})


def check_delta_bound(ch: Channel, tol: Optional[float] = None) -> CheckReport:
    """-X <= D <= X for X = P11 + P22 and D = P11 - P22 (smallest eigenvalue against zero)."""
    _require_qubit_input(ch, 'check_delta_bound')
    ch.require_cp('check_delta_bound')
    X = ch.block(0, 0) + ch.block(1, 1)
    Delta = ch.block(0, 0) - ch.block(1, 1)
    scale = 1 + maxabs(X)
    upper = float(np.min(np.linalg.eigvalsh((X - Delta + (X - Delta).conj().T) / 2))) / scale
    lower = float(np.min(np.linalg.eigvalsh((X + Delta + (X + Delta).conj().T) / 2))) / scale
    tol = float(config.numerics.psd_tol) if tol is None else tol
    unital = is_unital(ch)
    return CheckReport.build('delta-bound', lhs=-min(upper, lower), rhs=0.0, tol=tol,
                             params={'min_eig_X_minus_Delta': upper, 'min_eig_X_plus_Delta': lower,
                                     'unital': unital},
                             conditions={'X_minus_Delta_psd': upper >= -tol, 'X_plus_Delta_psd': lower >= -tol},
                             inputs={'ch': ch})


def check_identity_theorem(rho: Union[BipartiteBlockState, ComplexMatrix], q: Order,
                           tol: Optional[float] = None) -> CheckReport:
    """
    ||rho||_q <= ||B||_q + ||D||_q.

    Also records the conjugated form: with rho = X*X and X = (X1|X2),
    ||rho||_q = ||X1 X1* + X2 X2*||_q, which the triangle inequality bounds.
    """
    rho, order = _as_state(rho), check_order(q)
    beta, delta = schatten_norm(rho.B, order), schatten_norm(rho.D, order)
    X1, X2 = sqrt_factorization(rho.matrix, blocks=2).factors
    conjugated = schatten_norm(X1 @ X1.conj().T + X2 @ X2.conj().T, order)
    lhs = schatten_norm(rho.matrix, order)
    tol = _tol(tol)
    conditions = {}
    if not order.quasi:
        conditions['conjugate_norm_matches'] = abs(conjugated - lhs) <= 1e-9 * (1 + lhs)
    return CheckReport.build('identity-theorem', lhs=lhs, rhs=beta + delta, tol=tol,
                             params={'q': _q_param(order), 'd': rho.d, 'beta': beta, 'delta': delta,
                                     'conjugated': conjugated},
                             conditions=conditions, inputs={'rho': rho})


def check_single_kraus(A, rho: Union[BipartiteBlockState, ComplexMatrix], q: Order,
                       tol: Optional[float] = None) -> CheckReport:
    """Phase-angle bound for rho -> A rho A*, which itself lies below sigma_max(A)^2 (beta + delta)."""
    A = as_matrix(A, 'A')
    if A.shape[1] != 2:
        raise DimensionError(f'Single Kraus element must have two columns (given {A.shape})')
    ch = choi_from_kraus([A], label='single-kraus')
    rho, order = _as_state(rho), check_order(q)
    beta, delta = schatten_norm(rho.B, order), schatten_norm(rho.D, order)
    maximum = rhs_case3(ch, beta, delta, order)
    nu = float(np.linalg.norm(A, 2)) ** 2
    bound = nu * (beta + delta)
    tol = _tol(tol)
    return CheckReport.build('single-kraus', lhs=_output_norm(ch, rho, order), rhs=maximum.value, tol=tol,
                             params={'q': _q_param(order), 'beta': beta, 'delta': delta, 'nu': nu,
                                     'nu_bound': bound, 'theta_star': maximum.theta_star},
                             conditions={'rhs_le_nu_bound': bound - maximum.value >= -tol * (1 + bound)},
                             inputs={'A': A, 'rho': rho})


def check_cauchy_schwarz(X, Y, q: Order, tol: Optional[float] = None) -> CheckReport:
    """||Y*X||_q <= ||X*X||_q^(1/2) ||Y*Y||_q^(1/2)."""
    X, Y = as_matrix(X, 'X'), as_matrix(Y, 'Y')
    if X.shape[0] != Y.shape[0]:
        raise DimensionError(f'X and Y must have equal row counts (given {X.shape}, {Y.shape})')
    order = check_order(q)
    rhs = math.sqrt(schatten_norm(X.conj().T @ X, order) * schatten_norm(Y.conj().T @ Y, order))
    return CheckReport.build('cauchy-schwarz', lhs=schatten_norm(Y.conj().T @ X, order), rhs=rhs, tol=_tol(tol),
                             params={'q': _q_param(order), 'quasi': order.quasi},
                             inputs={'X': X, 'Y': Y})


def check_case3_implies_chris0(ch: Channel, beta: float, delta: float, q: Order,
                               opts: Optional[MopOptions] = None, tol: Optional[float] = None,
                               nu: Optional[float] = None) -> CheckReport:
    """Phase-angle bound <= nu_q(P) (beta + delta): its matrix is the image of a scaled pure state."""
    _require_qubit_input(ch, 'check_case3_implies_chris0')
    ch.require_cp('check_case3_implies_chris0')
    order = check_order(q)
    maximum = rhs_case3(ch, beta, delta, order)
    value, heuristic = _nu(ch, order, opts, nu)
    return CheckReport.build('case3-implies-chris0', lhs=maximum.value, rhs=value * (beta + delta),
                             tol=_tol(tol), params={'q': _q_param(order), 'beta': beta, 'delta': delta,
                                                    'nu': value, 'theta_star': maximum.theta_star,
                                                    'heuristic': heuristic},
                             inputs={'ch': ch, 'beta': float(beta), 'delta': float(delta)})


def check_toeplitz_decomposition(B, C, thetas: Optional[Sequence[float]] = None,
                                 P: Optional[Sequence[ComplexMatrix]] = None,
                                 tol: Optional[float] = None) -> CheckReport:
    """Construct (or take the given terms of) a block-Toeplitz decomposition and verify it."""
    if thetas is not None and P is not None:
        dec = ToeplitzDecomposition(tuple((float(theta), as_matrix(block, 'P')) for theta, block in zip(thetas, P)))
    else:
        dec = decompose_block_toeplitz(B, C)
    return verify_decomposition(dec, B, C, tol=tol)


def counterexample_f(p: Union[float, np.ndarray], b: float) -> Union[float, np.ndarray]:
    """((1+b)^p + (1-b)^p)(1 + b^p) - 2 (1+b^2)^p; vanishes at p = 2 for every b."""
    return ((1 + b) ** p + (1 - b) ** p) * (1 + b ** p) - 2 * (1 + b * b) ** p


def p0_of_b(b: float, p_max: Optional[float] = None, step: Optional[float] = None) -> float:
    """
    Root p0 > 2 of the counterexample equation.

    The interval (2, p_max] is scanned at `step` for the first sign change,
    which is then refined by bisection.
    """
    b = float(b)
    if not 0 < b < 1:
        raise InputError(f'Counterexample parameter must lie in (0, 1) (given {b})')
    if b < MIN_FAMILY_B:
        raise NoRootFound(f'No root in range: family degenerates for b={b:g} < {MIN_FAMILY_B:g}')
    p_max = float(config.counterexample.p_max) if p_max is None else float(p_max)
    step = float(config.counterexample.scan_step) if step is None else float(step)
    grid = 2 + step * np.arange(1, int(math.floor((p_max - 2) / step)) + 1)
    values = counterexample_f(grid, b)
    changes = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)[0]
    if changes.size == 0:
        raise NoRootFound(f'No root in range (2, {p_max:g}] for b={b:g} '
                          f'(f ranges over [{values.min():.3e}, {values.max():.3e}])')
    k = int(changes[0])
    lower, upper = float(grid[k]), float(grid[k + 1])
    if values[k] == 0:
        return lower
    root = optimize.bisect(counterexample_f, lower, upper, args=(b, ), xtol=ROOT_XTOL, maxiter=200)
    log.debug(f'Counterexample exponent p0={root:.12f} for b={b:g} (f={counterexample_f(root, b):.3e})')
    return float(root)


@dataclass(frozen=True)
class CounterexampleFamily:
    """Diagonal factors G1 = X1 = Diag(1, b), G2 = X2 = Diag(b, -1) violating the phase-angle bound."""

    b: float

    def __post_init__(self: CounterexampleFamily) -> None:
        if not 0 <= self.b <= 1:
            raise InputError(f'Counterexample parameter must lie in [0, 1] (given {self.b})')

    @property
    def G1(self: CounterexampleFamily) -> ComplexMatrix:
        return np.diag([1.0, self.b]).astype(np.complex128)

    @property
    def G2(self: CounterexampleFamily) -> ComplexMatrix:
        return np.diag([self.b, -1.0]).astype(np.complex128)

    X1 = G1
    X2 = G2

    @functools.cached_property
    def p0(self: CounterexampleFamily) -> float:
        return p0_of_b(self.b)

    def f(self: CounterexampleFamily, p: float) -> float:
        return float(counterexample_f(p, self.b))

    @property
    def window(self: CounterexampleFamily) -> Tuple[float, float]:
        """Open interval of 2q where the bound is violated."""
        return 2.0, self.p0

    @property
    def channel(self: CounterexampleFamily) -> Channel:
        return channel_from_factors([self.G1, self.G2], label=f'family({self.b:g})')

    @property
    def state(self: CounterexampleFamily) -> BipartiteBlockState:
        X1, X2 = self.X1, self.X2
        return BipartiteBlockState(X1.conj().T @ X1, X1.conj().T @ X2, X2.conj().T @ X2)

    def check(self: CounterexampleFamily, q: Order, tol: Optional[float] = None) -> CheckReport:
        report = check_case3_sqrt(self.G1, self.G2, self.X1, self.X2, q, tol=tol)
        report.params['b'] = self.b
        return report


Sampler = Callable[[Generator, int], Dict[str, Any]]


@dataclass(frozen=True)
class Checker:
    """
    Registered checker: an input sampler and the checking function.

    `min_q` and `allows_inf` bound the admissible Schatten orders; cells
    outside them produce skipped reports. Checkers that need no order
    (`uses_q` false) ignore it.
    """

    name: str
    func: Callable[..., CheckReport]
    sampler: Sampler
    min_q: float = 0.5
    allows_inf: bool = True
    uses_q: bool = True
    uses_optimizer: bool = False
    description: str = ''

    def admissible(self: Checker, q: Order) -> bool:
        order = check_order(q)
        if order.is_infinite:
            return self.allows_inf
        return order.q >= self.min_q

    def run(self: Checker, inputs: Dict[str, Any], q: Order, opts: Optional[MopOptions] = None,
            tol: Optional[float] = None) -> CheckReport:
        """Evaluate on explicit `inputs` (keyword arguments of the checking function)."""
        if self.uses_q and not self.admissible(q):
            return CheckReport.skipped(self.name, f'q={check_order(q)} outside admissible range',
                                       params={'q': _q_param(check_order(q))})
        kwargs = dict(inputs)
        if self.uses_q:
            kwargs['q'] = q
        if self.uses_optimizer:
            kwargs['opts'] = opts
        if tol is not None:
            kwargs['tol'] = tol
        report = self.func(**kwargs)
        if 'q' not in report.params:
            report.params['q'] = _q_param(check_order(q))
        return report

    def sample(self: Checker, rng: Generator, q: Order, d: int = 2, opts: Optional[MopOptions] = None,
               tol: Optional[float] = None) -> CheckReport:
        """Draw inputs from `rng` and evaluate."""
        if self.uses_q and not self.admissible(q):
            return CheckReport.skipped(self.name, f'q={check_order(q)} outside admissible range',
                                       params={'q': _q_param(check_order(q))})
        return self.run(self.sampler(rng, d), q, opts=opts, tol=tol)


def _rank(rng: Generator, d: int) -> int:
    return int(rng.integers(1, 2 * d + 1))


def _sample_map_and_state(rng: Generator, d: int) -> Dict[str, Any]:
    return {'ch': random_cp_map(2, d, _rank(rng, d), rng, trace_preserving=True),
            'rho': random_bipartite_state(d, rng)}


def _sample_pure_state(rng: Generator, d: int) -> Dict[str, Any]:
    psi = random_pure_state(2 * d, rng)
    return {'ch': random_cp_map(2, d, _rank(rng, d), rng, trace_preserving=True),
            'rho': BipartiteBlockState.from_matrix(np.outer(psi, psi.conj()))}


def _sample_eb_chris0(rng: Generator, d: int) -> Dict[str, Any]:
    return {'ch': random_eb_channel(2, d, rng), 'rho': random_bipartite_state(d, rng)}


def _sample_factors(rng: Generator, d: int) -> Dict[str, Any]:
    return {'G1': ginibre(d, d, rng), 'G2': ginibre(d, d, rng), 'X1': ginibre(d, d, rng), 'X2': ginibre(d, d, rng)}


def _sample_gram(rng: Generator, d: int) -> ComplexMatrix:
    G = ginibre(d, d, rng)
    return G @ G.conj().T


CHECKERS: Dict[str, Checker] = {checker.name: checker for checker in [
    Checker('chris0', check_chris0, _sample_map_and_state, uses_optimizer=True,
            description='Output norm against nu_q times the diagonal block norms'),
    Checker('chris0-eb', check_chris0, _sample_eb_chris0, uses_optimizer=True,
            description='Output-purity bound for entanglement-breaking maps'),
    Checker('case3', check_case3, _sample_map_and_state,
            description='Output norm against the phase-angle maximum'),
    Checker('case3-pure', check_case3, _sample_pure_state,
            description='Phase-angle bound on pure states'),
    Checker('case3-eb', check_case3, _sample_eb_chris0,
            description='Phase-angle bound for entanglement-breaking maps'),
    Checker('case3-sqrt', check_case3_sqrt, _sample_factors, min_q=0.5,
            description='Square-rooted phase-angle bound on factor blocks'),
    Checker('chris0-sqrt', check_chris0_sqrt, _sample_factors, uses_optimizer=True,
            description='Square-rooted output-purity bound on factor blocks'),
    Checker('identity-theorem', check_identity_theorem,
            lambda rng, d: {'rho': random_bipartite_state(d, rng)}, min_q=1,
            description='Norm of a block matrix against its diagonal block norms'),
    Checker('single-kraus', check_single_kraus,
            lambda rng, d: {'A': ginibre(d, 2, rng), 'rho': random_bipartite_state(d, rng)}, min_q=1,
            description='Phase-angle bound for a single Kraus element'),
    Checker('alt', check_alt,
            lambda rng, d: {'F': ginibre(d, d, rng), 'H': ginibre(d, d, rng)}, min_q=1, allows_inf=False,
            description='Trace inequality for F H F* with non-normal H'),
    Checker('positive-tensor', check_positive_tensor,
            lambda rng, d: {'A_list': [_sample_gram(rng, d) for _ in range(3)],
                            'B_list': [ginibre(d, d, rng) for _ in range(3)]}, min_q=1,
            description='Tensor sums with PSD left factors'),
    Checker('blockwise', check_blockwise,
            lambda rng, d: {'ch': random_linear_map(2, d, rng, psd_blocks=True), 'X': ginibre(2 * d, 2 * d, rng)},
            min_q=1, description='Maps whose Choi blocks are all PSD'),
    Checker('psd-phase-sqrt', check_psd_phase_sqrt,
            lambda rng, d: {'H1': _sample_gram(rng, d), 'H2': _sample_gram(rng, d),
                            'theta1': float(rng.uniform(0, 2 * math.pi)), 'theta2': float(rng.uniform(0, 2 * math.pi)),
                            'X1': ginibre(d, d, rng), 'X2': ginibre(d, d, rng)},
            min_q=0.5, description='Square-rooted bound for PSD factors up to phases'),
    Checker('separable-bound', check_separable_bound,
            lambda rng, d: {'ch': random_cp_map(2, d, _rank(rng, d), rng, trace_preserving=True),
                            'components': [list(pair) for pair in separable_components(2, d, 3, rng)]},
            min_q=1, uses_optimizer=True, description='Output norm of separable states'),
    Checker('multiplicativity-eb', check_multiplicativity_eb,
            lambda rng, d: {'ch': random_cp_map(2, 2, _rank(rng, 2), rng, trace_preserving=True),
                            'eb': random_eb_channel(2, 2, rng)},
            min_q=1, uses_optimizer=True, description='Multiplicativity with an entanglement-breaking factor'),
    Checker('toeplitz-theorem', check_toeplitz_theorem,
            lambda rng, d: {'ch': random_linear_map(2, d, rng, hermitian_blocks=True),
                            **dict(zip(('B', 'C'), random_toeplitz_state(d, rng)))},
            min_q=1, description='Phase-angle bound for equal diagonal blocks and any Hermitian-block map'),
    Checker('delta-bound', check_delta_bound,
            lambda rng, d: {'ch': random_cp_map(2, d, _rank(rng, d), rng)}, uses_q=False,
            description='Diagonal block difference bounded by their sum'),
    Checker('cauchy-schwarz', check_cauchy_schwarz,
            lambda rng, d: {'X': ginibre(d, d, rng), 'Y': ginibre(d, d, rng)}, min_q=1,
            description='Cauchy-Schwarz inequality for Schatten norms'),
    Checker('case3-implies-chris0', check_case3_implies_chris0,
            lambda rng, d: {'ch': random_cp_map(2, d, _rank(rng, d), rng, trace_preserving=True),
                            'beta': float(rng.uniform(0, 1)), 'delta': float(rng.uniform(0, 1))},
            min_q=1, uses_optimizer=True, description='Phase-angle bound below the output-purity bound'),
    Checker('toeplitz-decomposition', check_toeplitz_decomposition,
            lambda rng, d: dict(zip(('B', 'C'), random_toeplitz_state(d, rng))), uses_q=False,
            description='Finite positive decomposition of block-Toeplitz states'),
]}


def get_checker(name: str) -> Checker:
    try:
        return CHECKERS[name]
    except KeyError:
        raise UnknownChecker(f'Unknown checker \'{name}\' (available: {", ".join(sorted(CHECKERS))})') from None
