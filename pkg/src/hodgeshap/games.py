"""Cooperative games and classical Shapley values.

A game on ``n`` players is a dense value table over all ``2**n`` coalitions
with the empty coalition pinned to zero.  Tables are immutable numpy arrays
indexed by coalition bitmask (see :mod:`hodgeshap.bitsets`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .bitsets import (
    CoalitionLike,
    as_mask,
    bit_for,
    check_player,
    check_player_count,
    coalition_label,
    compressed_indices,
    masks_without_bit,
    popcounts,
    swap_indices,
)
from .errors import GameConstraintError

PERMUTATION_CAP = 10  # shapley_by_permutations enumerates n! orders


class Game:
    """Immutable value table ``coalition mask -> float`` with ``v({}) = 0``."""

    __slots__ = ("n_players", "values")

    def __init__(self, n_players: int, values: np.ndarray):
        n = check_player_count(n_players)
        table = np.asarray(values, dtype=np.float64)
        if table.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} values for {n} players, got shape {table.shape}")
        if table[0] != 0.0:
            raise GameConstraintError("the empty coalition must have value 0")
        table = table.copy()
        table.setflags(write=False)
        object.__setattr__(self, "n_players", n)
        object.__setattr__(self, "values", table)

    def __setattr__(self, name, value):
        raise AttributeError("Game is immutable")

    def value(self, coalition: CoalitionLike) -> float:
        return float(self.values[as_mask(coalition, self.n_players)])

    def grand_value(self) -> float:
        return float(self.values[-1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return self.n_players == other.n_players and bool(
            np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "Game") -> "Game":
        if not isinstance(other, Game):
            return NotImplemented
        if other.n_players != self.n_players:
            raise ValueError("player counts differ")
        return Game(self.n_players, self.values + other.values)

    def __sub__(self, other: "Game") -> "Game":
        if not isinstance(other, Game):
            return NotImplemented
        if other.n_players != self.n_players:
            raise ValueError("player counts differ")
        return Game(self.n_players, self.values - other.values)

    def __mul__(self, scalar: float) -> "Game":
        return Game(self.n_players, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Game":
        return Game(self.n_players, -self.values)

    def __repr__(self) -> str:
        nonzero = {
            coalition_label(m): float(v) for m, v in enumerate(self.values) if v != 0.0
        }
        return f"Game(n_players={self.n_players}, nonzero={nonzero})"


@dataclass(frozen=True)
class ShapleyAllocation:
    """Per-player split of the grand-coalition value."""

    n_players: int
    phi: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=np.float64)
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)

    def __getitem__(self, player: int) -> float:
        return float(self.phi[check_player(player, self.n_players) - 1])

    def total(self) -> float:
        return float(np.sum(self.phi))


def make_game(n_players: int, entries: Mapping[CoalitionLike, float]) -> Game:
    """Build a game from a partial coalition->value map; missing entries are 0."""
    n = check_player_count(n_players)
    values = np.zeros(1 << n)
    for coalition, value in entries.items():
        mask = as_mask(coalition, n)
        if mask == 0 and value != 0:
            raise GameConstraintError("the empty coalition must have value 0")
        values[mask] = float(value)
    return Game(n, values)


def zero_game(n_players: int) -> Game:
    return Game(check_player_count(n_players), np.zeros(1 << n_players))


def pure_bargaining(n_players: int) -> Game:
    """Value 1 at the grand coalition, 0 everywhere else."""
    n = check_player_count(n_players)
    values = np.zeros(1 << n)
    values[-1] = 1.0
    return Game(n, values)


def basis_game(n_players: int, support: CoalitionLike) -> Game:
    """Indicator game of a single nonempty coalition."""
    n = check_player_count(n_players)
    mask = as_mask(support, n)
    if mask == 0:
        raise ValueError("basis game support must be nonempty")
    values = np.zeros(1 << n)
    values[mask] = 1.0
    return Game(n, values)


def edge_game(n_players: int, base: CoalitionLike, player: int) -> Game:
    """Value 1 at ``base`` and ``base | {player}``; ``player`` is null in it."""
    n = check_player_count(n_players)
    i = check_player(player, n)
    base_mask = as_mask(base, n)
    if base_mask == 0:
        raise ValueError("edge game base must be nonempty")
    if base_mask & bit_for(i):
        raise ValueError(f"player {i} already belongs to the base coalition")
    values = np.zeros(1 << n)
    values[base_mask] = 1.0
    values[base_mask | bit_for(i)] = 1.0
    return Game(n, values)


def additive_game(weights: Iterable[float]) -> Game:
    """``v(S) = sum of weights over S``; each player contributes a constant."""
    w = np.asarray(list(weights), dtype=np.float64)
    n = check_player_count(len(w))
    values = np.zeros(1 << n)
    for b in range(n):
        has_bit = (np.arange(1 << n) >> b) & 1 == 1
        values[has_bit] += w[b]
    return Game(n, values)


def swap_coalition(coalition: CoalitionLike, i: int, j: int, n_players: int) -> int:
    """Exchange the membership of players ``i`` and ``j`` in one coalition."""
    n = check_player_count(n_players)
    mask = as_mask(coalition, n)
    check_player(i, n)
    check_player(j, n)
    bi, bj = bit_for(i), bit_for(j)
    has_i, has_j = bool(mask & bi), bool(mask & bj)
    if has_i == has_j:
        return mask
    return mask ^ bi ^ bj


def swap_players(v: Game, i: int, j: int) -> Game:
    """The game with the contributions of players ``i`` and ``j`` interchanged."""
    n = v.n_players
    check_player(i, n)
    check_player(j, n)
    return Game(n, v.values[swap_indices(n, i, j)])


def restrict_game(v: Game, player: int) -> Game:
    """Drop ``player``; survivors are relabeled order-preservingly onto 1..n-1."""
    n = v.n_players
    if n < 2:
        raise ValueError("cannot restrict a single-player game")
    b = check_player(player, n) - 1
    return Game(n - 1, v.values[masks_without_bit(n, b)])


def lift_game(v: Game, player: int) -> Game:
    """Inverse relabeling of :func:`restrict_game`: insert ``player`` as a null
    player, flat in its direction."""
    n = v.n_players + 1
    b = check_player(player, n) - 1
    return Game(n, v.values[compressed_indices(n, b)])


@lru_cache(maxsize=None)
def _shapley_weights(n: int) -> np.ndarray:
    """``|S|! (n-1-|S|)! / n!`` for ``|S| = 0..n-1``, exact then one float cast."""
    fact = [Fraction(1)]
    for k in range(1, n + 1):
        fact.append(fact[-1] * k)
    w = [fact[s] * fact[n - 1 - s] / fact[n] for s in range(n)]
    out = np.array([float(x) for x in w])
    out.setflags(write=False)
    return out


def shapley_direct(v: Game) -> ShapleyAllocation:
    """Shapley values from the weighted-marginal sum over coalitions."""
    n = v.n_players
    weights = _shapley_weights(n)
    sizes = popcounts(n)
    phi = np.empty(n)
    for b in range(n):
        without = masks_without_bit(n, b)
        marginals = v.values[without | (1 << b)] - v.values[without]
        # np.sum is pairwise, keeping the accumulated rounding small
        phi[b] = np.sum(weights[sizes[without]] * marginals)
    return ShapleyAllocation(n, phi)


def shapley_by_permutations(v: Game, max_players: int = PERMUTATION_CAP) -> ShapleyAllocation:
    """Shapley values by enumerating all ``n!`` joining orders."""
    n = v.n_players
    if n > max_players:
        raise ValueError(
            f"permutation enumeration capped at {max_players} players, got {n}"
        )
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    n_perms = perms.shape[0]
    totals = np.zeros(n)
    prefix = np.zeros(n_perms, dtype=np.int64)
    for k in range(n):
        joining = perms[:, k]
        joined = prefix | (np.int64(1) << joining)
        marginals = v.values[joined] - v.values[prefix]
        totals += np.bincount(joining, weights=marginals, minlength=n)
        prefix = joined
    return ShapleyAllocation(n, totals / n_perms)
