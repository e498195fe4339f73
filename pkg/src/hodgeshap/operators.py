"""Discrete calculus on the hypercube graph.

Vertices are coalition masks, edges are oriented along single-player
inclusions ``S -> S | {i}``.  Vertex fields are plain float arrays of length
``2**n``; edge fields store one value per inclusion-oriented edge and negate
on reverse reads.  The Laplacian here is ``divergence(gradient(u))``,
computed matrix-free.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .bitsets import check_player, masks_without_bit
from .errors import InconsistentRHS, NonConvergence

DENSE_SOLVER_CAP = 10  # dense factorizations stop paying off past 2**10 vertices

_REPROJECT_EVERY = 50  # CG iterations between constant-mode deflations


def _n_from_vertex_field(u: np.ndarray) -> int:
    size = u.shape[0]
    n = size.bit_length() - 1
    if size != 1 << n or u.ndim != 1:
        raise ValueError(f"vertex field length must be a power of two, got {u.shape}")
    return n


@dataclass(frozen=True)
class EdgeField:
    """Values on the ``n * 2**(n-1)`` inclusion-oriented edges.

    Row ``b`` holds direction ``b + 1``; column ``c`` is the edge whose lower
    endpoint compresses (bit ``b`` removed) to ``c``.  Reads of a
    reverse-oriented edge return the negation.
    """

    n_players: int
    values: np.ndarray

    def __post_init__(self):
        n = self.n_players
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (n, 1 << (n - 1)):
            raise ValueError(
                f"expected edge table of shape {(n, 1 << (n - 1))}, got {vals.shape}"
            )
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def value(self, a: int, b: int) -> float:
        """Value on the (possibly reverse-oriented) edge from ``a`` to ``b``."""
        toggled = a ^ b
        if toggled == 0 or (toggled & (toggled - 1)) != 0:
            raise ValueError(f"masks {a} and {b} are not hypercube neighbors")
        bit = toggled.bit_length() - 1
        lower = a & ~toggled
        column = _compress(lower, bit)
        stored = float(self.values[bit, column])
        return stored if b > a else -stored

    def __add__(self, other: "EdgeField") -> "EdgeField":
        if not isinstance(other, EdgeField):
            return NotImplemented
        if other.n_players != self.n_players:
            raise ValueError("player counts differ")
        return EdgeField(self.n_players, self.values + other.values)


def _compress(mask: int, bit: int) -> int:
    low = mask & ((1 << bit) - 1)
    return ((mask >> (bit + 1)) << bit) | low


def vertex_inner(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.dot(u, v))


def edge_inner(f: EdgeField, g: EdgeField) -> float:
    if f.n_players != g.n_players:
        raise ValueError("player counts differ")
    return float(np.sum(f.values * g.values))


def gradient(u: np.ndarray) -> EdgeField:
    """Forward difference ``u(S | {i}) - u(S)`` on every oriented edge."""
    n = _n_from_vertex_field(u)
    out = np.empty((n, 1 << (n - 1)))
    for b in range(n):
        lower = masks_without_bit(n, b)
        out[b] = u[lower | (1 << b)] - u[lower]
    return EdgeField(n, out)


def divergence(f: EdgeField) -> np.ndarray:
    """Adjoint of the gradient: at each vertex, the sum of inflow over its
    ``n`` incident edges under the antisymmetric reverse-edge convention."""
    n = f.n_players
    out = np.zeros(1 << n)
    for b in range(n):
        # each mask appears exactly once per direction, so plain fancy
        # indexing accumulates correctly
        lower = masks_without_bit(n, b)
        row = f.values[b]
        out[lower] -= row
        out[lower | (1 << b)] += row
    return out


def partial_gradient(u: np.ndarray, player: int) -> EdgeField:
    """The gradient restricted to direction-``player`` edges, zero elsewhere."""
    n = _n_from_vertex_field(u)
    b = check_player(player, n) - 1
    out = np.zeros((n, 1 << (n - 1)))
    lower = masks_without_bit(n, b)
    out[b] = u[lower | (1 << b)] - u[lower]
    return EdgeField(n, out)


def laplacian_apply(u: np.ndarray) -> np.ndarray:
    """``n*u(S) - sum over neighbors``, matrix-free."""
    n = _n_from_vertex_field(u)
    cube = u.reshape((2,) * n)
    neighbor_sum = np.zeros_like(cube)
    for axis in range(n):
        neighbor_sum += np.flip(cube, axis=axis)
    return n * u - neighbor_sum.reshape(-1)


def divergence_of_partial(values: np.ndarray, player: int) -> np.ndarray:
    """``divergence(partial_gradient(values, player))`` in closed form.

    At ``S`` without the player the result is ``v(S) - v(S | {i})``; at
    ``S | {i}`` it is the negation.  No edge table is materialized.
    """
    n = _n_from_vertex_field(values)
    b = check_player(player, n) - 1
    lower = masks_without_bit(n, b)
    upper = lower | (1 << b)
    marginals = values[upper] - values[lower]
    out = np.empty(1 << n)
    out[lower] = -marginals
    out[upper] = marginals
    return out


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the singular least-squares solve.

    ``max_iterations=None`` means ``10 * 2**n``, resolved per call.
    """

    tolerance: float = 1e-12
    max_iterations: int | None = None
    method: str = "cg"

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.method not in ("cg", "dense"):
            raise ValueError(f"unknown solver method {self.method!r}")


def dense_laplacian(n: int) -> np.ndarray:
    """Explicit ``2**n x 2**n`` hypercube Laplacian (for oracles and the
    direct solver)."""
    size = 1 << n
    out = np.zeros((size, size))
    np.fill_diagonal(out, float(n))
    masks = np.arange(size)
    for b in range(n):
        out[masks, masks ^ (1 << b)] = -1.0
    return out


@lru_cache(maxsize=4)
def _dense_factorization(n: int):
    # Pinning u({}) = 0 deletes row/column 0; the remaining minor is SPD.
    minor = dense_laplacian(n)[1:, 1:]
    return scipy.linalg.cho_factor(minor, lower=True)


def _check_consistency(rhs: np.ndarray, tolerance: float) -> None:
    imbalance = abs(float(np.sum(rhs)))
    if imbalance > max(tolerance, 1e-12) * max(1.0, float(np.sum(np.abs(rhs)))):
        raise InconsistentRHS(
            f"right-hand side sums to {imbalance:.3e}; it must be orthogonal to constants"
        )


def _solve_dense(rhs: np.ndarray, n: int) -> np.ndarray:
    if n > DENSE_SOLVER_CAP:
        raise ValueError(
            f"dense solver supports up to {DENSE_SOLVER_CAP} players, got {n}"
        )
    out = np.zeros(1 << n)
    out[1:] = scipy.linalg.cho_solve(_dense_factorization(n), rhs[1:])
    return out


def _solve_cg(rhs: np.ndarray, n: int, tolerance: float, max_iterations: int) -> np.ndarray:
    scale = float(np.linalg.norm(rhs))
    if scale == 0.0:
        return np.zeros(1 << n)
    x = np.zeros(1 << n)
    r = rhs.copy()
    p = r.copy()
    rr = float(np.dot(r, r))
    target = tolerance * max(scale, 1e-300)
    for iteration in range(1, max_iterations + 1):
        lp = laplacian_apply(p)
        alpha = rr / float(np.dot(p, lp))
        x += alpha * p
        r -= alpha * lp
        if iteration % _REPROJECT_EVERY == 0:
            # deflate float drift along the constant nullspace and refresh
            # the residual against the true operator
            x -= np.mean(x)
            r = rhs - laplacian_apply(x)
        rr_next = float(np.dot(r, r))
        if np.sqrt(rr_next) <= target:
            true_residual = rhs - laplacian_apply(x)
            if float(np.linalg.norm(true_residual)) <= target:
                return x
            r = true_residual
            rr_next = float(np.dot(r, r))
        p = r + (rr_next / rr) * p
        rr = rr_next
    raise NonConvergence(
        f"conjugate gradient did not reach tolerance {tolerance:g} "
        f"within {max_iterations} iterations"
    )


def solve_least_squares(rhs: np.ndarray, config: SolverConfig | None = None) -> np.ndarray:
    """Solve ``laplacian u = rhs`` on the hypercube, normalized to ``u({}) = 0``.

    The Laplacian is singular with the constants as nullspace, so ``rhs``
    must sum to zero (any divergence does).  The returned representative is
    the unique solution vanishing at the empty coalition.
    """
    config = config or SolverConfig()
    rhs = np.asarray(rhs, dtype=np.float64)
    n = _n_from_vertex_field(rhs)
    _check_consistency(rhs, config.tolerance)
    rhs = rhs - np.mean(rhs)  # drop the (tiny) inconsistent component
    if config.method == "dense":
        u = _solve_dense(rhs, n)
    else:
        max_iterations = config.max_iterations or 10 * (1 << n)
        u = _solve_cg(rhs, n, config.tolerance, max_iterations)
    return u - u[0]


def relative_residual(u: np.ndarray, rhs: np.ndarray) -> float:
    scale = max(float(np.linalg.norm(rhs)), 1e-300)
    return float(np.linalg.norm(laplacian_apply(u) - rhs)) / scale
