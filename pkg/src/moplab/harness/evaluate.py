# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Evaluate norms, output purity, complementary maps, and decompositions."""


# type annotations
from __future__ import annotations
from typing import List, Dict, Any, Optional, Callable, Final

# external libs
import numpy as np
from cmdkit.app import Application
from cmdkit.cli import Interface, ArgumentError

# internal libs
from moplab.core.logging import Logger
from moplab.core.exceptions import get_shared_exception_mapping, InputError, MoplabError
from moplab.core.types import parse_float_list
from moplab.matcore import schatten_norm, entropy, maxabs
from moplab.channels import (Channel, identity_channel, depolarizing_channel, completely_depolarizing,
                             amplitude_damping_channel, dephasing_channel, kraus_from_choi,
                             complementary_channel, conjugate_map, random_toeplitz_state)
from moplab.mop import MopOptions, nu_q, nu_q_tensor, nu_s_result
from moplab.toeplitz import decompose_block_toeplitz, verify_decomposition
from moplab.data import load_matrix, load_channel, load_state, encode_channel, dump_document
from moplab.harness.output import OUTPUT_FORMATS, print_records, print_document

# public interface
__all__ = ['NormApp', 'MopApp', 'ComplementApp', 'DecomposeApp', 'BUILTIN_CHANNELS', 'builtin_channel', ]

# initialize logger
log = Logger.with_name(__name__)


BUILTIN_CHANNELS: Final[Dict[str, Callable[[Optional[float]], Channel]]] = {
    'identity': lambda _: identity_channel(2),
    'completely-depolarizing': lambda _: completely_depolarizing(2),
    'depolarizing': lambda value: depolarizing_channel(value, 2),
    'amplitude-damping': amplitude_damping_channel,
    'dephasing': dephasing_channel,
}

PARAMETRIC_CHANNELS: Final[List[str]] = ['depolarizing', 'amplitude-damping', 'dephasing']


def builtin_channel(text: str) -> Channel:
    """Build a named qubit channel from NAME[:PARAM] (e.g., 'depolarizing:0.5')."""
    name, _, param = text.partition(':')
    if name not in BUILTIN_CHANNELS:
        raise ArgumentError(f'Unknown channel \'{name}\' (available: {", ".join(BUILTIN_CHANNELS)})')
    if name in PARAMETRIC_CHANNELS and not param:
        raise ArgumentError(f'Channel \'{name}\' requires a parameter (e.g., {name}:0.5)')
    try:
        value = float(param) if param else None
    except ValueError:
        raise ArgumentError(f'Channel parameter must be a number (given \'{param}\')') from None
    return BUILTIN_CHANNELS[name](value)


def resolve_channel(filepath: Optional[str], builtin: Optional[str], d_in: Optional[int]) -> Channel:
    if builtin:
        return builtin_channel(builtin)
    if filepath:
        return load_channel(filepath, d_in=d_in)
    raise ArgumentError('Expected a channel (--in FILE or --channel NAME[:PARAM])')


CHANNEL_NAMES = ', '.join(BUILTIN_CHANNELS)


NORM_PROGRAM = 'moplab norm'
NORM_USAGE = f"""\
Usage:
  {NORM_PROGRAM} [-h] --in FILE [--q LIST] [--entropy] [--format FORMAT]
  Schatten norms and entropy of a matrix.\
"""

NORM_HELP = f"""\
{NORM_USAGE}

  The matrix document is read from FILE ('-' for stdin). Orders may be any
  positive number or 'inf'; orders below one give quasi-norms.

Options:
  -i, --in        FILE     Path to matrix document.
  -q, --q         LIST     Comma-separated orders (default: 1,2,inf).
  -e, --entropy            Include von Neumann entropy (PSD input).
  -f, --format    FORMAT   Output format ({', '.join(OUTPUT_FORMATS)}).
  -h, --help               Show this message and exit.\
"""


class NormApp(Application):
    """Schatten norms and entropy of a matrix."""

    interface = Interface(NORM_PROGRAM, NORM_USAGE, NORM_HELP)

    filepath: str = None
    interface.add_argument('-i', '--in', required=True, dest='filepath')

    orders: List[float] = [1.0, 2.0, float('inf')]
    interface.add_argument('-q', '--q', type=parse_float_list, default=orders, dest='orders')

    with_entropy: bool = False
    interface.add_argument('-e', '--entropy', action='store_true', dest='with_entropy')

    output_format: str = 'normal'
    interface.add_argument('-f', '--format', choices=OUTPUT_FORMATS, default=output_format, dest='output_format')

    exceptions = {
        **get_shared_exception_mapping(__name__)
    }

    def run(self: NormApp) -> None:
        """Business logic for `norm`."""
        matrix = load_matrix(self.filepath)
        rows: List[Dict[str, Any]] = [{'measure': 'schatten', 'q': q, 'value': schatten_norm(matrix, q)}
                                      for q in self.orders]
        if self.with_entropy:
            rows.append({'measure': 'entropy', 'q': None, 'value': entropy(matrix)})
        print_records(rows, ['measure', 'q', 'value'], self.output_format, command='norm')


MOP_PROGRAM = 'moplab mop'
MOP_USAGE = f"""\
Usage:
  {MOP_PROGRAM} [-h] (--in FILE [--d-in N] | --channel NAME[:PARAM]) [--q LIST] [--entropy]
             [--tensor FILE | --tensor-channel NAME[:PARAM]] [--grid N,M] [--restarts N]
             [--tol VALUE] [--max-dim N] [--seed N] [--format FORMAT]
  Maximal output purity and minimal output entropy.\
"""

MOP_HELP = f"""\
{MOP_USAGE}

  Qubit-input maps are searched on a Bloch-sphere grid and polished; larger
  inputs use projected ascent from random restarts. With a second map
  (--tensor or --tensor-channel) the purity of the tensor product is
  compared against the product of the factor values.

  Builtin channels: {CHANNEL_NAMES}.

Options:
  -i, --in              FILE     Path to channel document.
      --d-in            N        Input dimension for bare Choi matrices (default: 2).
  -c, --channel         NAME     Builtin channel, NAME[:PARAM].
  -q, --q               LIST     Comma-separated orders (default: 2).
  -e, --entropy                  Include minimal output entropy.
      --tensor          FILE     Second map for the tensor product.
      --tensor-channel  NAME     Builtin second map for the tensor product.
      --grid            N,M      Bloch-sphere grid (theta, phi).
      --restarts        N        Random restarts for larger inputs.
      --tol             VALUE    Convergence tolerance.
      --max-dim         N        Largest input dimension optimized.
  -s, --seed            N        Seed for restarts.
  -f, --format          FORMAT   Output format ({', '.join(OUTPUT_FORMATS)}).
  -h, --help                     Show this message and exit.\
"""


def parse_grid(value: str) -> tuple:
    try:
        sizes = tuple(int(item) for item in value.split(','))
    except ValueError:
        raise ArgumentError(f'Expected grid as N,M (given \'{value}\')') from None
    if len(sizes) != 2 or min(sizes) < 2:
        raise ArgumentError(f'Expected grid as N,M with N, M >= 2 (given \'{value}\')')
    return sizes


class MopApp(Application):
    """Maximal output purity and minimal output entropy."""

    interface = Interface(MOP_PROGRAM, MOP_USAGE, MOP_HELP)

    filepath: str = None
    builtin: str = None
    source_interface = interface.add_mutually_exclusive_group()
    source_interface.add_argument('-i', '--in', default=None, dest='filepath')
    source_interface.add_argument('-c', '--channel', default=None, dest='builtin')

    d_in: int = None
    interface.add_argument('--d-in', type=int, default=None, dest='d_in')

    orders: List[float] = [2.0]
    interface.add_argument('-q', '--q', type=parse_float_list, default=orders, dest='orders')

    with_entropy: bool = False
    interface.add_argument('-e', '--entropy', action='store_true', dest='with_entropy')

    tensor_filepath: str = None
    tensor_builtin: str = None
    tensor_interface = interface.add_mutually_exclusive_group()
    tensor_interface.add_argument('--tensor', default=None, dest='tensor_filepath')
    tensor_interface.add_argument('--tensor-channel', default=None, dest='tensor_builtin')

    grid: tuple = None
    interface.add_argument('--grid', type=parse_grid, default=None)

    restarts: int = None
    interface.add_argument('--restarts', type=int, default=None)

    tolerance: float = None
    interface.add_argument('--tol', type=float, default=None, dest='tolerance')

    max_dim: int = None
    interface.add_argument('--max-dim', type=int, default=None, dest='max_dim')

    seed: int = None
    interface.add_argument('-s', '--seed', type=int, default=None)

    output_format: str = 'normal'
    interface.add_argument('-f', '--format', choices=OUTPUT_FORMATS, default=output_format, dest='output_format')

    exceptions = {
        **get_shared_exception_mapping(__name__)
    }

    def run(self: MopApp) -> None:
        """Business logic for `mop`."""
        channel = resolve_channel(self.filepath, self.builtin, self.d_in)
        options = MopOptions.from_config(grid=self.grid, restarts=self.restarts, tolerance=self.tolerance,
                                         max_dim=self.max_dim, seed=self.seed)
        other = None
        if self.tensor_filepath or self.tensor_builtin:
            other = resolve_channel(self.tensor_filepath, self.tensor_builtin, self.d_in)
        rows = []
        for q in self.orders:
            if other is None:
                result = nu_q(channel, q, options)
                rows.append({'objective': 'purity', 'q': q, 'value': result.value, 'product': None,
                             'gap': None, 'heuristic': result.heuristic, 'restarts': result.restarts})
            else:
                result = nu_q_tensor(channel, other, q, options)
                rows.append({'objective': 'purity', 'q': q, 'value': result.value,
                             'product': float(np.prod(result.factor_values)), 'gap': result.gap,
                             'heuristic': result.heuristic, 'restarts': result.restarts})
        if self.with_entropy:
            result = nu_s_result(channel, options)
            rows.append({'objective': 'entropy', 'q': None, 'value': result.value, 'product': None,
                         'gap': None, 'heuristic': result.heuristic, 'restarts': result.restarts})
        fields = ['objective', 'q', 'value', 'heuristic', 'restarts']
        if other is not None:
            fields[3:3] = ['product', 'gap']
        print_records(rows, fields, self.output_format, command='mop', channel=repr(channel))


COMPLEMENT_PROGRAM = 'moplab complement'
COMPLEMENT_USAGE = f"""\
Usage:
  {COMPLEMENT_PROGRAM} [-h] (--in FILE [--d-in N] | --channel NAME[:PARAM]) [--conjugate] [--out FILE]
  Complementary or conjugated map of a channel.\
"""

COMPLEMENT_HELP = f"""\
{COMPLEMENT_USAGE}

  The complementary map sends rho to the matrix with entries Tr[A_k rho A_j*]
  for Kraus elements A_k. With --conjugate the conjugated map (factor order
  swapped in the Gram factorization of the Choi matrix) is written instead.

Options:
  -i, --in         FILE     Path to channel document.
      --d-in       N        Input dimension for bare Choi matrices (default: 2).
  -c, --channel    NAME     Builtin channel, NAME[:PARAM].
      --conjugate           Write the conjugated map.
  -o, --out        FILE     Output path (default: stdout).
  -h, --help                Show this message and exit.\
"""


class ComplementApp(Application):
    """Complementary or conjugated map of a channel."""

    interface = Interface(COMPLEMENT_PROGRAM, COMPLEMENT_USAGE, COMPLEMENT_HELP)

    filepath: str = None
    builtin: str = None
    source_interface = interface.add_mutually_exclusive_group()
    source_interface.add_argument('-i', '--in', default=None, dest='filepath')
    source_interface.add_argument('-c', '--channel', default=None, dest='builtin')

    d_in: int = None
    interface.add_argument('--d-in', type=int, default=None, dest='d_in')

    conjugate: bool = False
    interface.add_argument('--conjugate', action='store_true')

    outpath: str = '-'
    interface.add_argument('-o', '--out', default=outpath, dest='outpath')

    exceptions = {
        **get_shared_exception_mapping(__name__)
    }

    def run(self: ComplementApp) -> None:
        """Business logic for `complement`."""
        channel = resolve_channel(self.filepath, self.builtin, self.d_in)
        if self.conjugate:
            result = conjugate_map(channel)
        else:
            channel.require_cp('Complementary channel')
            result = complementary_channel(kraus_from_choi(channel))
        log.debug(f'Built {result!r} from {channel!r}')
        document = encode_channel(result)
        if self.outpath == '-':
            print_document(document)
        else:
            dump_document(document, self.outpath)


DECOMPOSE_PROGRAM = 'moplab decompose'
DECOMPOSE_USAGE = f"""\
Usage:
  {DECOMPOSE_PROGRAM} [-h] [--in FILE | --seed N [--dim D]] [--tol VALUE] [--out FILE]
  Positive decomposition of a block-Toeplitz state.\
"""

DECOMPOSE_HELP = f"""\
{DECOMPOSE_USAGE}

  The state [[B, C], [C*, B]] is written as a sum over angles t_k of
  [[1, e^(it)], [e^(-it), 1]] (x) P_k with P_k positive. The input state must
  have equal diagonal blocks; without --in a random supported state is drawn.
  The decomposition is verified before it is written.

Options:
  -i, --in     FILE     Path to bipartite-state document.
  -s, --seed   N        Seed for a random state (default: 0).
  -d, --dim    D        Block dimension for a random state (default: 2).
      --tol    VALUE    Reconstruction tolerance.
  -o, --out    FILE     Output path (default: stdout).
  -h, --help            Show this message and exit.\
"""


class DecomposeApp(Application):
    """Positive decomposition of a block-Toeplitz state."""

    interface = Interface(DECOMPOSE_PROGRAM, DECOMPOSE_USAGE, DECOMPOSE_HELP)

    filepath: str = None
    interface.add_argument('-i', '--in', default=None, dest='filepath')

    seed: int = 0
    interface.add_argument('-s', '--seed', type=int, default=seed)

    dim: int = 2
    interface.add_argument('-d', '--dim', type=int, default=dim)

    tolerance: float = None
    interface.add_argument('--tol', type=float, default=None, dest='tolerance')

    outpath: str = '-'
    interface.add_argument('-o', '--out', default=outpath, dest='outpath')

    exceptions = {
        **get_shared_exception_mapping(__name__)
    }

    def run(self: DecomposeApp) -> None:
        """Business logic for `decompose`."""
        B, C = self.load_blocks()
        decomposition = decompose_block_toeplitz(B, C)
        report = verify_decomposition(decomposition, B, C, tol=self.tolerance)
        if not report.holds:
            raise MoplabError(f'Decomposition failed verification (residual {report.lhs:.3e}, '
                              f'failed: {", ".join(report.failed_conditions) or "none"})')
        log.info(f'Decomposed into {decomposition.count} terms (residual {report.lhs:.3e})')
        document = {**decomposition.to_json(), 'report': report.to_json()}
        if self.outpath == '-':
            print_document(document)
        else:
            dump_document(document, self.outpath)

    def load_blocks(self: DecomposeApp) -> tuple:
        if self.filepath is None:
            return random_toeplitz_state(self.dim, self.seed)
        state = load_state(self.filepath)
        if maxabs(state.B - state.D) > 1e-10 * (1 + maxabs(state.B)):
            raise InputError(f'Diagonal blocks differ; not a block-Toeplitz state ({self.filepath})')
        return state.B, state.C
