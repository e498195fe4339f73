"""Pure-Python walker kernel; twin of the compiled module ``_walk``.

Both backends implement the identical counter-based random walk so results
are bitwise-interchangeable: a sample's stream is keyed by
``(seed, sample_index)`` and each step draws from a splitmix64 mix of the
stream key and the step counter.  Keep every constant and the accumulation
order in sync with ``_walk.pyx``.
"""

from __future__ import annotations

BACKEND = "python"

_M64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mixdown(z: int) -> int:
    z &= _M64
    z = ((z ^ (z >> 30)) * _MIX1) & _M64
    z = ((z ^ (z >> 27)) * _MIX2) & _M64
    return z ^ (z >> 31)


def stream_key(seed: int, sample_index: int) -> int:
    return _mixdown((seed + (sample_index + 1) * _GAMMA) & _M64)


def draw(key: int, step: int, n_players: int) -> int:
    """0-based player toggled at 1-based ``step`` of the keyed walk."""
    return _mixdown((key + step * _GAMMA) & _M64) % n_players


def walk_players(values, n_players, target, start, seed, sample_index, max_steps, out_players):
    """Run one walk to ``target``; per-player contribution sums into
    ``out_players``.  Returns 0, or 1 if the step cap was hit."""
    vals = values.tolist()
    acc = [0.0] * n_players
    key = stream_key(seed, sample_index)
    state = start
    step = 0
    while state != target:
        if step >= max_steps:
            return 1
        step += 1
        d = draw(key, step, n_players)
        new = state ^ (1 << d)
        acc[d] += vals[new] - vals[state]
        state = new
    for b in range(n_players):
        out_players[b] = acc[b]
    return 0


def walk_batch(values, n_players, player, target, start, seed, first_sample, n_samples,
               max_steps, out):
    """Fill ``out[k]`` with player ``player``'s contribution on sample
    ``first_sample + k``.

    Returns ``(status, bad_sample, max_efficiency_defect)`` where status 1
    means the step cap was hit on ``bad_sample``, and the defect is the worst
    per-path gap between the summed per-player contributions and
    ``v(target) - v(start)``.
    """
    vals = values.tolist()
    p = player - 1
    span = vals[target] - vals[start]
    max_defect = 0.0
    for k in range(n_samples):
        key = stream_key(seed, first_sample + k)
        acc = [0.0] * n_players
        state = start
        step = 0
        while state != target:
            if step >= max_steps:
                return 1, first_sample + k, max_defect
            step += 1
            d = draw(key, step, n_players)
            new = state ^ (1 << d)
            acc[d] += vals[new] - vals[state]
            state = new
        out[k] = acc[p]
        total = 0.0
        for b in range(n_players):
            total += acc[b]
        defect = abs(total - span)
        if defect > max_defect:
            max_defect = defect
    return 0, -1, max_defect
