"""Bitmask encoding of coalitions.

A coalition over players ``1..n`` is stored as an ``n``-bit integer mask with
player ``i`` on bit ``i - 1``.  Value tables over all ``2**n`` coalitions are
dense numpy arrays indexed directly by mask.  The helpers here are cached and
return read-only arrays so they can be shared freely.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Union

import numpy as np

CoalitionLike = Union[int, Iterable[int]]

MAX_PLAYERS = 20  # dense 2**n tables stay below a gigabyte up to here


def full_mask(n: int) -> int:
    return (1 << n) - 1


def bit_for(player: int) -> int:
    return 1 << (player - 1)


def check_player_count(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise TypeError(f"player count must be an integer, got {n!r}")
    if n < 1:
        raise ValueError(f"player count must be >= 1, got {n}")
    if n > MAX_PLAYERS:
        raise ValueError(f"player count {n} exceeds the supported ceiling {MAX_PLAYERS}")
    return int(n)


def check_player(player: int, n: int) -> int:
    if not isinstance(player, (int, np.integer)) or isinstance(player, bool):
        raise TypeError(f"player must be an integer, got {player!r}")
    if not 1 <= player <= n:
        raise ValueError(f"player {player} out of range 1..{n}")
    return int(player)


def as_mask(coalition: CoalitionLike, n: int) -> int:
    """Normalize a coalition (mask or iterable of players) to a bitmask."""
    if isinstance(coalition, (int, np.integer)) and not isinstance(coalition, bool):
        mask = int(coalition)
        if not 0 <= mask <= full_mask(n):
            raise ValueError(f"mask {mask} out of range for {n} players")
        return mask
    mask = 0
    for player in coalition:
        mask |= bit_for(check_player(player, n))
    return mask


def members(mask: int) -> tuple[int, ...]:
    """Players in the coalition, ascending."""
    out = []
    player = 1
    while mask:
        if mask & 1:
            out.append(player)
        mask >>= 1
        player += 1
    return tuple(out)


def coalition_label(mask: int) -> str:
    """Render a mask as a sorted brace list, e.g. ``{1,3}``; empty is ``{}``."""
    return "{" + ",".join(str(p) for p in members(mask)) + "}"


def insert_bit(mask: int, bit: int) -> int:
    """Widen a mask by inserting a zero at position ``bit``."""
    low = mask & ((1 << bit) - 1)
    return ((mask >> bit) << (bit + 1)) | low


def remove_bit(mask: int, bit: int) -> int:
    """Narrow a mask (which must not contain ``bit``) by deleting that position."""
    low = mask & ((1 << bit) - 1)
    return ((mask >> (bit + 1)) << bit) | low


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """``|S|`` for every mask ``S`` in ``[0, 2**n)`` (SWAR, uint32 masks)."""
    x = np.arange(1 << n, dtype=np.uint32)
    x = x - ((x >> 1) & 0x55555555)
    x = (x & 0x33333333) + ((x >> 2) & 0x33333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F
    return _readonly(((x * 0x01010101) >> 24).astype(np.int64))


@lru_cache(maxsize=None)
def masks_without_bit(n: int, bit: int) -> np.ndarray:
    """All masks with ``bit`` clear, ordered by their bit-removed compression.

    Entry ``c`` is the mask whose compression (deleting position ``bit``)
    equals ``c``, so this doubles as the expansion table.
    """
    c = np.arange(1 << (n - 1), dtype=np.int64)
    low = c & ((1 << bit) - 1)
    return _readonly(((c >> bit) << (bit + 1)) | low)


@lru_cache(maxsize=None)
def compressed_indices(n: int, bit: int) -> np.ndarray:
    """Bit-removed compression of every mask in ``[0, 2**n)``.

    Masks that differ only in ``bit`` compress to the same index.
    """
    m = np.arange(1 << n, dtype=np.int64)
    low = m & ((1 << bit) - 1)
    return _readonly(((m >> (bit + 1)) << bit) | low)


@lru_cache(maxsize=None)
def swap_indices(n: int, i: int, j: int) -> np.ndarray:
    """Mask of ``S`` with the membership of players ``i`` and ``j`` exchanged."""
    m = np.arange(1 << n, dtype=np.int64)
    bi, bj = bit_for(i), bit_for(j)
    has_i = (m & bi) != 0
    has_j = (m & bj) != 0
    out = m.copy()
    only_i = has_i & ~has_j
    only_j = has_j & ~has_i
    out[only_i] = (m[only_i] & ~bi) | bj
    out[only_j] = (m[only_j] & ~bj) | bi
    return _readonly(out)
