"""Random-walk value functions on the hypercube.

A uniform chain toggles one of the ``n`` players per step.  A player's
contribution along a path is the sum of the game's marginal changes on the
steps that toggle that player; stopped at the first visit to a target
coalition, its expectation per player reproduces the component games of
:func:`hodgeshap.decompose.decompose`, which is what the exact oracle here
lets tests verify.

Sampling uses a counter-based stream keyed by ``(seed, sample_index)``, so
estimates are reproducible and independent of how samples are distributed
over workers.  The compiled kernel is preferred when built; set
``HODGESHAP_PURE_PYTHON=1`` to force the pure-Python twin.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .bitsets import as_mask, bit_for, check_player, coalition_label
from .errors import SolveFailure, StepCapExceeded
from .games import Game
from .operators import DENSE_SOLVER_CAP

if os.environ.get("HODGESHAP_PURE_PYTHON"):
    from . import _walk_py as _kernel
else:
    try:
        from . import _walk as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _walk_py as _kernel

_CHUNK = 1 << 15  # fixed sample chunk, so worker count never changes the reduction shape

DEFAULT_MAX_STEPS = 10_000_000


def sampling_backend() -> str:
    """Name of the active walker kernel: ``"cython"`` or ``"python"``."""
    return _kernel.BACKEND


@dataclass(frozen=True)
class ChainConfig:
    """Walk parameters: start coalition, stream seed, per-sample step cap."""

    n_players: int
    start: int = 0
    seed: int = 0
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        object.__setattr__(self, "start", as_mask(self.start, self.n_players))
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        object.__setattr__(self, "seed", int(self.seed) & (1 << 64) - 1)


@dataclass(frozen=True)
class PathEstimate:
    """Monte Carlo estimate of one player's expected path contribution."""

    target: int
    player: int
    samples: int
    mean: float
    std_error: float


def step_chain(state: int, player_draw: int, n_players: int) -> int:
    """One transition: toggle the membership of the drawn player."""
    check_player(player_draw, n_players)
    return as_mask(state, n_players) ^ bit_for(player_draw)


def sample_path_contribution(
    v: Game, player: int, target: int, config: ChainConfig, sample_index: int = 0
) -> float:
    """Player's summed marginal contribution along one sampled walk."""
    profile = sample_path_profile(v, target, config, sample_index)
    return float(profile[check_player(player, v.n_players) - 1])


def sample_path_profile(
    v: Game, target: int, config: ChainConfig, sample_index: int = 0
) -> np.ndarray:
    """All players' contributions along one sampled walk (shared path)."""
    n = v.n_players
    target_mask = as_mask(target, n)
    out = np.zeros(n)
    status = _kernel.walk_players(
        v.values, n, target_mask, config.start, config.seed, int(sample_index),
        config.max_steps, out,
    )
    if status != 0:
        raise StepCapExceeded(
            f"sample {sample_index} exceeded {config.max_steps} steps before "
            f"hitting {coalition_label(target_mask)}",
            sample_index=int(sample_index),
        )
    return out


def estimate_value(
    v: Game,
    player: int,
    target: int,
    config: ChainConfig,
    samples: int,
    workers: int = 1,
) -> PathEstimate:
    """Mean and standard error of the player's contribution over independent
    walks.

    Sample ``k`` always uses the stream keyed by ``(seed, k)`` and chunks
    have a fixed shape, so the result is bitwise-identical for any
    ``workers``.
    """
    n = v.n_players
    i = check_player(player, n)
    target_mask = as_mask(target, n)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    contributions = np.empty(samples)
    chunks = [
        (lo, min(lo + _CHUNK, samples)) for lo in range(0, samples, _CHUNK)
    ]

    def run(chunk: tuple[int, int]):
        lo, hi = chunk
        return _kernel.walk_batch(
            v.values, n, i, target_mask, config.start, config.seed, lo, hi - lo,
            config.max_steps, contributions[lo:hi],
        )

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, chunks))
    else:
        results = [run(c) for c in chunks]
    for status, bad_sample, _ in results:
        if status != 0:
            raise StepCapExceeded(
                f"sample {bad_sample} exceeded {config.max_steps} steps before "
                f"hitting {coalition_label(target_mask)}",
                sample_index=int(bad_sample),
            )
    mean = float(np.mean(contributions))
    if samples > 1:
        std_error = float(np.std(contributions, ddof=1) / np.sqrt(samples))
    else:
        std_error = 0.0
    return PathEstimate(target_mask, i, samples, mean, std_error)


def estimate_efficiency_defect(
    v: Game, target: int, config: ChainConfig, samples: int
) -> float:
    """Worst per-path gap of ``sum over players of contribution`` against
    ``v(target) - v(start)`` over a batch of walks (0 when the identity holds
    path-wise)."""
    n = v.n_players
    target_mask = as_mask(target, n)
    scratch = np.empty(min(samples, _CHUNK))
    worst = 0.0
    for lo in range(0, samples, _CHUNK):
        count = min(_CHUNK, samples - lo)
        status, bad_sample, defect = _kernel.walk_batch(
            v.values, n, 1, target_mask, config.start, config.seed, lo, count,
            config.max_steps, scratch[:count],
        )
        if status != 0:
            raise StepCapExceeded(
                f"sample {bad_sample} exceeded {config.max_steps} steps",
                sample_index=int(bad_sample),
            )
        worst = max(worst, defect)
    return worst


def _hitting_matrix_dense(n: int, target: int) -> np.ndarray:
    size = 1 << n
    a = np.zeros((size, size))
    np.fill_diagonal(a, float(n))
    masks = np.arange(size)
    for b in range(n):
        a[masks, masks ^ (1 << b)] = -1.0
    a[target, :] = 0.0
    a[target, target] = 1.0
    return a


def _hitting_matrix_sparse(n: int, target: int) -> scipy.sparse.csr_matrix:
    size = 1 << n
    masks = np.arange(size)
    rows = [masks, masks]
    cols = [masks, masks]
    data = [np.full(size, float(n)), np.zeros(size)]
    for b in range(n):
        rows.append(masks)
        cols.append(masks ^ (1 << b))
        data.append(np.full(size, -1.0))
    a = scipy.sparse.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size),
    )
    a = a.tolil()
    a[target, :] = 0.0
    a[target, target] = 1.0
    return a.tocsr()


def exact_values(v: Game, target: int) -> np.ndarray:
    """Expected path contributions by first-step analysis, every player and
    every start.

    Row ``i - 1`` solves ``h(target) = 0`` and, elsewhere,
    ``n*h(x) - sum over neighbors h(y) = v(x toggled by i) - v(x)``; entry
    ``x`` is the expectation for a walk started at ``x``.  Independent of the
    least-squares machinery by construction.
    """
    n = v.n_players
    size = 1 << n
    target_mask = as_mask(target, n)
    rhs = np.empty((size, n))
    masks = np.arange(size)
    for b in range(n):
        rhs[:, b] = v.values[masks ^ (1 << b)] - v.values[masks]
    rhs[target_mask, :] = 0.0
    if n <= DENSE_SOLVER_CAP:
        matrix = _hitting_matrix_dense(n, target_mask)
        solution = scipy.linalg.solve(matrix, rhs)
        residual = np.max(np.abs(matrix @ solution - rhs))
    else:
        matrix = _hitting_matrix_sparse(n, target_mask)
        solution = np.empty((size, n))
        for b in range(n):
            column, info = scipy.sparse.linalg.lgmres(
                matrix, rhs[:, b], rtol=1e-13, atol=0.0, maxiter=2000
            )
            if info != 0:
                raise SolveFailure(
                    f"hitting-time solve for player {b + 1} did not converge"
                )
            solution[:, b] = column
        residual = np.max(np.abs(matrix @ solution - rhs))
    scale = max(1.0, float(np.max(np.abs(rhs))))
    if residual > 1e-10 * scale:
        raise SolveFailure(
            f"hitting-time solve residual {residual:.3e} exceeds tolerance"
        )
    solution[target_mask, :] = 0.0  # enforce the boundary condition exactly
    return np.ascontiguousarray(solution.T)


def exact_value(v: Game, player: int, target: int, start: int = 0) -> float:
    """Expected contribution of one player for a walk from ``start`` stopped
    at the first visit to ``target``."""
    n = v.n_players
    i = check_player(player, n)
    return float(exact_values(v, target)[i - 1, as_mask(start, n)])


def check_transition_formula(v: Game, player: int, s: int, t: int) -> float:
    """Worst defect of the restart identity for expected contributions.

    Splitting a walk at its first visit to ``s`` gives
    ``E[to t] - E[to s] = E[s to t]``; reversing paths gives
    ``E[s to t] = -E[t to s]``.  Both are checked via the exact oracle and
    the larger absolute defect is returned.
    """
    n = v.n_players
    i = check_player(player, n)
    s_mask = as_mask(s, n)
    t_mask = as_mask(t, n)
    to_t = exact_values(v, t_mask)[i - 1]
    to_s = exact_values(v, s_mask)[i - 1]
    value_t = to_t[0]
    value_s = to_s[0]
    restarted = to_t[s_mask]
    transition_defect = abs(value_t - value_s - restarted)
    antisymmetry_defect = abs(restarted + to_s[t_mask])
    return max(transition_defect, antisymmetry_defect)
