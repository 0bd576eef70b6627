# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""
Maximal output purity and minimal output entropy.

Both quantities are optimizations over pure inputs. For qubit inputs a dense
Bloch-sphere grid is scanned and the best points are refined with a simplex
search. Larger inputs use seeded random starts with projected ascent along
great circles of the unit sphere. Values are always attained by the returned
input state, so they are lower bounds on the true maximum.
"""


# type annotations
from __future__ import annotations
from typing import Tuple, List, Optional, Sequence, Union

# standard libs
import math
from dataclasses import dataclass, field, replace

# external libs
import numpy as np
from scipy import optimize, special
from cmdkit.config import Configuration

# internal libs
from moplab.core.config import config as default_config
from moplab.core.logging import Logger
from moplab.core.exceptions import DimensionCapExceeded
from moplab.matcore import SchattenOrder, Seed, check_order, as_generator, canonical_phase
from moplab.channels import Channel, tensor_channel, random_pure_state

# public interface
__all__ = ['MopOptions', 'MopResult', 'nu_q', 'nu_q_tensor', 'nu_s', 'nu_s_result',
           'output_state', 'purity_value', 'bloch_vector_state', ]

# initialize logger
log = Logger.with_name(__name__)


# Values closer than this are ties and resolved by the largest |<0|psi>|
TIE_TOL: float = 1e-12

# Batch size for vectorized grid evaluation
GRID_CHUNK: int = 4096

# Central-difference step for objectives without an analytic gradient
FD_STEP: float = 1e-6


@dataclass(frozen=True)
class MopOptions:
    """Optimizer settings; defaults follow the `mop` configuration section."""

    grid: Tuple[int, int] = (120, 240)
    polish: int = 5
    restarts: int = 64
    tolerance: float = 1e-7
    max_dim: int = 8
    seed: Seed = 0
    max_iter: int = 400

    @classmethod
    def from_config(cls, base: Configuration = None, **overrides) -> MopOptions:
        """Build from configuration with keyword overrides (None values are ignored)."""
        section = (base if base is not None else default_config).mop
        options = cls(grid=tuple(int(n) for n in section.grid),
                      polish=int(section.polish),
                      restarts=int(section.restarts),
                      tolerance=float(section.tolerance),
                      max_dim=int(section.max_dim),
                      seed=int(section.seed),
                      max_iter=int(section.max_iter))
        return replace(options, **{key: value for key, value in overrides.items() if value is not None})


@dataclass(frozen=True, eq=False)
class MopResult:
    """
    Outcome of an output-purity (or output-entropy) optimization.

    `value` is attained at `argmax`. For entropy results `q` is None and the
    value is the smallest entropy found. Tensor results carry the product
    of the factor values and the multiplicativity gap.
    """

    value: float
    argmax: np.ndarray
    q: Optional[SchattenOrder]
    iterations: int
    restarts: int
    best_per_restart: Tuple[float, ...]
    heuristic: bool
    objective: str = 'purity'
    factor_values: Tuple[float, ...] = field(default=())
    gap: Optional[float] = None

    @property
    def quasi(self: MopResult) -> bool:
        """Objective uses a quasi-norm (definition extended to q < 1)."""
        return self.q is not None and self.q.quasi

    def to_json(self: MopResult) -> dict:
        return {
            'objective': self.objective,
            'q': None if self.q is None else (None if self.q.is_infinite else self.q.q),
            'q_label': None if self.q is None else str(self.q),
            'value': self.value,
            'argmax': [[float(z.real), float(z.imag)] for z in self.argmax],
            'iterations': self.iterations,
            'restarts': self.restarts,
            'best_per_restart': list(self.best_per_restart),
            'heuristic': self.heuristic,
            'quasi': self.quasi,
            'factor_values': list(self.factor_values),
            'gap': self.gap,
        }


def output_state(ch: Channel, psi: np.ndarray) -> np.ndarray:
    """Image of the pure state |psi><psi|."""
    return np.einsum('i,iajb,j->ab', psi, ch.blocks4, psi.conj())


def _batch_outputs(ch: Channel, psis: np.ndarray) -> np.ndarray:
    return np.einsum('ni,iajb,nj->nab', psis, ch.blocks4, psis.conj())


def _batch_eigenvalues(outputs: np.ndarray) -> np.ndarray:
    hermitian = (outputs + np.conj(np.swapaxes(outputs, -1, -2))) / 2
    return np.clip(np.linalg.eigvalsh(hermitian), 0.0, None)


def _purity_from_eigenvalues(values: np.ndarray, q: float) -> np.ndarray:
    """Row-wise Schatten norm of non-negative eigenvalue rows."""
    top = np.max(values, axis=-1)
    if math.isinf(q):
        return top
    safe = np.where(top > 0, top, 1.0)
    ratio = values / safe[..., None]
    return np.where(top > 0, top * np.sum(ratio ** q, axis=-1) ** (1.0 / q), 0.0)


def _entropy_from_eigenvalues(values: np.ndarray) -> np.ndarray:
    return -np.sum(special.xlogy(values, values), axis=-1)


def purity_value(ch: Channel, psi: np.ndarray, q: Union[float, SchattenOrder]) -> float:
    """Schatten q-norm of the output for input |psi><psi|."""
    order = check_order(q)
    values = _batch_eigenvalues(output_state(ch, psi)[None])
    return float(_purity_from_eigenvalues(values, order.q)[0])


def bloch_vector_state(theta: float, phi: float) -> np.ndarray:
    """Qubit pure state cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>."""
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)], dtype=np.complex128)


class _Objective:
    """Score to maximize over unit vectors, batched and scalar, with an optional analytic gradient."""

    def __init__(self: _Objective, ch: Channel, order: Optional[SchattenOrder]) -> None:
        self.ch = ch
        self.order = order
        self.evaluations = 0

    def batch(self: _Objective, psis: np.ndarray) -> np.ndarray:
        self.evaluations += len(psis)
        values = _batch_eigenvalues(_batch_outputs(self.ch, psis))
        if self.order is None:
            return -_entropy_from_eigenvalues(values)
        return _purity_from_eigenvalues(values, self.order.q)

    def __call__(self: _Objective, psi: np.ndarray) -> float:
        return float(self.batch((psi / np.linalg.norm(psi))[None])[0])

    def report(self: _Objective, score: float) -> float:
        """Convert an internal score to the reported value."""
        return -score if self.order is None else score

    @property
    def analytic(self: _Objective) -> bool:
        return self.order is not None and not self.order.is_infinite and self.order.q >= 1

    def gradient(self: _Objective, psi: np.ndarray) -> np.ndarray:
        """Ascent direction with respect to conj(psi)."""
        if self.analytic:
            return self._analytic_gradient(psi)
        return self._numerical_gradient(psi)

    def _analytic_gradient(self: _Objective, psi: np.ndarray) -> np.ndarray:
        # d Tr[Y^q] / d conj(psi) = q T^T psi with T_ij = Tr[Y^(q-1) Phi_ij]
        q = self.order.q
        Y = output_state(self.ch, psi)
        values, vectors = np.linalg.eigh((Y + Y.conj().T) / 2)
        values = np.clip(values, 0.0, None)
        M = (vectors * values ** (q - 1)) @ vectors.conj().T
        T = np.einsum('ba,iajb->ij', M, self.ch.blocks4)
        self.evaluations += 1
        return q * (T.T @ psi)

    def _numerical_gradient(self: _Objective, psi: np.ndarray) -> np.ndarray:
        d = len(psi)
        steps = np.concatenate([np.eye(d), 1j * np.eye(d)]) * FD_STEP
        points = np.concatenate([psi + steps, psi - steps])
        points = points / np.linalg.norm(points, axis=1)[:, None]
        values = self.batch(points)
        forward, backward = values[:2 * d], values[2 * d:]
        derivative = (forward - backward) / (2 * FD_STEP)
        return derivative[:d] + 1j * derivative[d:]


def _tie_break(candidates: Sequence[Tuple[float, np.ndarray]]) -> Tuple[float, np.ndarray]:
    """Best score; near-ties go to the largest |<0|psi>|, then the canonical phase."""
    best = max(score for score, _ in candidates)
    tied = [(score, psi) for score, psi in candidates if score >= best - TIE_TOL * (1 + abs(best))]
    score, psi = max(tied, key=lambda item: abs(item[1][0]))
    return score, canonical_phase(psi / np.linalg.norm(psi))


def _qubit_search(objective: _Objective, opts: MopOptions,
                  seeds: Sequence[np.ndarray] = ()) -> Tuple[float, np.ndarray, int, List[float]]:
    """Bloch grid scan followed by simplex refinement of the best grid points."""
    n_theta, n_phi = opts.grid
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing='ij')
    tt, pp = tt.reshape(-1), pp.reshape(-1)
    psis = np.stack([np.cos(tt / 2), np.exp(1j * pp) * np.sin(tt / 2)], axis=1)
    scores = np.concatenate([objective.batch(psis[start:start + GRID_CHUNK])
                             for start in range(0, len(psis), GRID_CHUNK)])
    order = np.argsort(-scores, kind='stable')[:max(opts.polish, 1)]
    log.trace(f'Grid scan {n_theta}x{n_phi}: best score {scores[order[0]]:.12g}')

    def negative(x: np.ndarray) -> float:
        return -objective(bloch_vector_state(x[0], x[1]))

    # angles to `tolerance`; the score is quadratic near a maximum
    simplex = {'xatol': opts.tolerance, 'fatol': opts.tolerance ** 2, 'maxiter': 4000}
    candidates, iterations, per_start = [], 0, []
    for index in order:
        start = np.array([tt[index], pp[index]])
        result = optimize.minimize(negative, start, method='Nelder-Mead', options=simplex)
        iterations += int(result.nit)
        polished = (-float(result.fun), bloch_vector_state(*result.x))
        if polished[0] < scores[index]:
            polished = (float(scores[index]), psis[index])
        candidates.append(polished)
        per_start.append(polished[0])
        log.trace(f'Simplex refinement from grid point {index}: {polished[0]:.12g} ({result.nit} iterations)')
    for psi in seeds:
        candidates.append((objective(psi), psi))
    score, psi = _tie_break(candidates)
    return score, psi, iterations, per_start


def _ascend(objective: _Objective, psi: np.ndarray, max_iter: int,
            tolerance: float = 1e-7) -> Tuple[float, np.ndarray, int]:
    """
    Projected ascent on the unit sphere with adaptive geodesic steps.

    Stops when the tangent gradient falls below 10 * tolerance**2, when an accepted
    step improves the score by at most tolerance**2 (relative), or after `max_iter`.
    """
    psi = psi / np.linalg.norm(psi)
    score = objective(psi)
    step = 0.5
    threshold = tolerance ** 2
    for iteration in range(1, max_iter + 1):
        gradient = objective.gradient(psi)
        tangent = gradient - np.vdot(psi, gradient) * psi
        size = np.linalg.norm(tangent)
        if size < 10 * threshold:
            return score, psi, iteration
        direction = tangent / size
        while step > 1e-10:
            trial = math.cos(step) * psi + math.sin(step) * direction
            trial = trial / np.linalg.norm(trial)
            trial_score = objective(trial)
            if trial_score > score:
                improvement = trial_score - score
                psi, score = trial, trial_score
                if improvement <= threshold * (1 + abs(score)):
                    return score, psi, iteration
                step = min(step * 1.5, 1.0)
                break
            step /= 2
        else:
            return score, psi, iteration
    return score, psi, max_iter


def _sphere_search(objective: _Objective, d: int, opts: MopOptions,
                   seeds: Sequence[np.ndarray] = ()) -> Tuple[float, np.ndarray, int, List[float]]:
    """Seeded random restarts of projected ascent, best-of."""
    rng = as_generator(opts.seed)
    starts = [np.asarray(psi, dtype=np.complex128) for psi in seeds]
    starts += [random_pure_state(d, rng) for _ in range(opts.restarts)]
    candidates, iterations, per_start = [], 0, []
    for count, start in enumerate(starts):
        score, psi, used = _ascend(objective, start, opts.max_iter, opts.tolerance)
        candidates.append((score, psi))
        per_start.append(score)
        iterations += used
        log.trace(f'Restart {count}: score {score:.12g} after {used} iterations')
    score, psi = _tie_break(candidates)
    return score, psi, iterations, per_start


def _optimize(ch: Channel, order: Optional[SchattenOrder], opts: MopOptions,
              seeds: Sequence[np.ndarray] = ()) -> MopResult:
    objective = _Objective(ch, order)
    if ch.d_in == 1:
        psi = np.ones(1, dtype=np.complex128)
        score, iterations, per_start, restarts = objective(psi), 0, [], 0
    elif ch.d_in == 2:
        score, psi, iterations, per_start = _qubit_search(objective, opts, seeds)
        restarts = len(per_start)
    else:
        score, psi, iterations, per_start = _sphere_search(objective, ch.d_in, opts, seeds)
        restarts = len(per_start)
    value = objective.report(score)
    result = MopResult(value=value, argmax=psi, q=order, iterations=iterations, restarts=restarts,
                       best_per_restart=tuple(objective.report(s) for s in per_start),
                       heuristic=ch.d_in > 2, objective='purity' if order is not None else 'entropy')
    log.debug(f'{result.objective} optimum {value:.12g} for {ch!r} '
              f'({restarts} starts, {objective.evaluations} evaluations)')
    return result


def nu_q(ch: Channel, q: Union[float, SchattenOrder], opts: Optional[MopOptions] = None) -> MopResult:
    """Maximal output purity: largest Schatten q-norm of an output over pure inputs."""
    ch.require_cp('Maximal output purity')
    opts = opts or MopOptions.from_config()
    return _optimize(ch, check_order(q), opts)


def nu_q_tensor(ch1: Channel, ch2: Channel, q: Union[float, SchattenOrder],
                opts: Optional[MopOptions] = None) -> MopResult:
    """
    Maximal output purity of the tensor product map.

    The product of the factor maximizers seeds the search, so the returned
    value never falls below the product of the factor values.
    """
    ch1.require_cp('Maximal output purity')
    ch2.require_cp('Maximal output purity')
    opts = opts or MopOptions.from_config()
    d = ch1.d_in * ch2.d_in
    if d > opts.max_dim:
        raise DimensionCapExceeded(f'Composite input dimension {d} exceeds cap {opts.max_dim}')
    order = check_order(q)
    first, second = nu_q(ch1, order, opts), nu_q(ch2, order, opts)
    product = np.kron(first.argmax, second.argmax)
    joint = _optimize(tensor_channel(ch1, ch2), order, opts, seeds=[product])
    expected = first.value * second.value
    gap = joint.value - expected
    log.debug(f'Tensor optimum {joint.value:.12g} vs product {expected:.12g} (gap {gap:.3e})')
    return replace(joint, factor_values=(first.value, second.value), gap=gap)


def nu_s_result(ch: Channel, opts: Optional[MopOptions] = None) -> MopResult:
    """Minimal output entropy with its minimizing input."""
    ch.require_cp('Minimal output entropy')
    ch.require_tp('Minimal output entropy')
    opts = opts or MopOptions.from_config()
    return _optimize(ch, None, opts)


def nu_s(ch: Channel, opts: Optional[MopOptions] = None) -> float:
    """Minimal output entropy (natural log) over pure inputs."""
    return nu_s_result(ch, opts).value
