"""Per-player component games of a cooperative game.

Three independent routes produce the same decomposition:

* :func:`decompose` solves the least-squares system
  ``laplacian(v_i) = divergence_of_partial(v, i)`` per player.
* :func:`bargaining_closed_form` evaluates the unanimity game's components
  from an exact rational recursion.
* :func:`decompose_axiomatic` expands a game over indicator games and
  resolves each one through the axiom system (null-player lifting plus the
  closed form at the top), using only game identities, never the Laplacian.

The grand-coalition entry of each component equals the player's Shapley
value, which is what makes the decomposition a coalition-wise refinement of
the classical allocation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bitsets import (
    check_player,
    check_player_count,
    compressed_indices,
    full_mask,
    popcounts,
    remove_bit,
)
from .errors import NonConvergence
from .games import Game
from .operators import SolverConfig, divergence_of_partial, relative_residual, solve_least_squares


@dataclass(frozen=True)
class Decomposition:
    """A game split into one component game per player."""

    source: Game
    components: tuple[Game, ...]
    residual_norms: tuple[float, ...]

    def component(self, player: int) -> Game:
        return self.components[check_player(player, self.source.n_players) - 1]

    def component_table(self) -> np.ndarray:
        """Stacked component values, shape ``(n_players, 2**n)``."""
        return np.stack([c.values for c in self.components])

    def efficiency_defect(self) -> float:
        """Worst coalition-wise gap between the game and the component sum."""
        total = np.sum(self.component_table(), axis=0)
        return float(np.max(np.abs(total - self.source.values)))


def _as_decomposition(v: Game, tables: np.ndarray) -> Decomposition:
    residuals = tuple(
        relative_residual(tables[b], divergence_of_partial(v.values, b + 1))
        for b in range(v.n_players)
    )
    components = tuple(Game(v.n_players, tables[b]) for b in range(v.n_players))
    return Decomposition(v, components, residuals)


def decompose(v: Game, config: SolverConfig | None = None) -> Decomposition:
    """Solve the per-player least-squares systems for the component games."""
    config = config or SolverConfig()
    n = v.n_players
    tables = np.empty((n, 1 << n))
    for b in range(n):
        rhs = divergence_of_partial(v.values, b + 1)
        try:
            tables[b] = solve_least_squares(rhs, config)
        except NonConvergence as exc:
            raise NonConvergence(f"player {b + 1}: {exc}", player=b + 1) from exc
    return _as_decomposition(v, tables)


def bargaining_fractions(n_players: int) -> tuple[list[Fraction], list[Fraction]]:
    """Exact component values of the unanimity game, by coalition size.

    Returns ``(inside, outside)`` where ``inside[k]`` is the component value
    a member of a size-``k`` coalition receives and ``outside[k]`` the value
    a non-member receives.  Derived from the reflection recursion: centered
    values ``u_i = v_i - 1/(n*2**n)`` satisfy ``u_i(T) = -u_i(T - {i})`` with
    a shared constant per size, and the per-size balance
    ``sum_i u_i(T) = [T = full] - 2**-n`` pins the outside value.
    """
    n = check_player_count(n_players)
    center = Fraction(1, n * (1 << n))
    total = Fraction(-1, 1 << n)  # per-coalition sum of centered values below the top
    inside = [Fraction(0)] * (n + 1)
    outside = [Fraction(0)] * (n + 1)
    outside[0] = -center
    for k in range(1, n + 1):
        inside[k] = -outside[k - 1]
        if k < n:
            outside[k] = (total - k * inside[k]) / (n - k)
    return inside, outside


def bargaining_closed_form(n_players: int) -> Decomposition:
    """Component games of the pure bargaining game from the exact recursion."""
    n = check_player_count(n_players)
    inside, outside = bargaining_fractions(n)
    center = Fraction(1, n * (1 << n))
    inside_f = np.array([float(x + center) for x in inside])
    outside_f = np.array([float(x + center) for x in outside])
    sizes = popcounts(n)
    masks = np.arange(1 << n)
    tables = np.empty((n, 1 << n))
    for b in range(n):
        has = (masks >> b) & 1 == 1
        tables[b] = np.where(has, inside_f[sizes], outside_f[sizes])
        tables[b, 0] = 0.0
    source = Game(n, np.where(masks == full_mask(n), 1.0, 0.0))
    return _as_decomposition(source, tables)


def _basis_tables(n_cap: int) -> list[dict[int, np.ndarray]]:
    """Component tables for every indicator game up to ``n_cap`` players.

    ``tables[n][support]`` has shape ``(n, 2**n)``.  Supports are resolved
    from the grand coalition downward: the top one comes from the closed
    form, every other support ``S`` picks a missing player ``i`` and uses
    ``indicator(S) = two-point game on (S, S | {i}) - indicator(S | {i})``,
    where the two-point game's components are the lifted components of the
    one-smaller indicator (player ``i`` is null in it).
    """
    levels: list[dict[int, np.ndarray]] = [dict() for _ in range(n_cap + 1)]
    for n in range(1, n_cap + 1):
        full = full_mask(n)
        closed = bargaining_closed_form(n)
        table = {full: closed.component_table()}
        for support in sorted(range(1, full), key=lambda m: -int(popcounts(n)[m])):
            b = 0
            while support & (1 << b):
                b += 1
            sub = levels[n - 1][remove_bit(support, b)]
            lifted = np.zeros((n, 1 << n))
            cols = compressed_indices(n, b)
            for row in range(n):
                if row == b:
                    continue
                lifted[row] = sub[row if row < b else row - 1][cols]
            table[support] = lifted - table[support | (1 << b)]
        levels[n] = table
    return levels


def decompose_axiomatic(v: Game, depth_cap: int = 8) -> Decomposition:
    """Decompose by linearity over indicator games resolved axiomatically.

    Exponential in the player count (every indicator game is materialized),
    hence the cap; intended as an independent oracle for :func:`decompose`.
    """
    n = v.n_players
    if n > depth_cap:
        raise ValueError(f"axiomatic recursion capped at {depth_cap} players, got {n}")
    basis = _basis_tables(n)[n]
    tables = np.zeros((n, 1 << n))
    for support in range(1, 1 << n):
        coefficient = v.values[support]
        if coefficient != 0.0:
            tables += coefficient * basis[support]
    return _as_decomposition(v, tables)
