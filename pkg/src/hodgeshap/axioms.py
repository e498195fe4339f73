"""Executable axiom checks for decompositions and Shapley allocations.

Every check returns an :class:`AxiomReport` carrying the worst observed
defect and the instance that produced it; callers own the pass threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitsets import (
    bit_for,
    check_player,
    coalition_label,
    masks_without_bit,
    swap_indices,
)
from .decompose import Decomposition, decompose
from .errors import NotNullPlayer
from .games import Game, pure_bargaining, restrict_game, shapley_direct, swap_players
from .operators import SolverConfig

EFFICIENCY = "A1"
SYMMETRY = "A2"
NULL_PLAYER = "A3"
LINEARITY = "A4"
REFLECTION = "A5"
SHAPLEY_EFFICIENCY = "shapley-efficiency"
SHAPLEY_SYMMETRY = "shapley-symmetry"
SHAPLEY_NULL = "shapley-null"
SHAPLEY_LINEARITY = "shapley-linearity"


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    max_defect: float
    witness: str

    def within(self, tolerance: float) -> bool:
        return self.max_defect <= tolerance


def check_efficiency(v: Game, d: Decomposition) -> AxiomReport:
    """Components must sum back to the game, coalition by coalition."""
    gaps = np.abs(np.sum(d.component_table(), axis=0) - v.values)
    worst = int(np.argmax(gaps))
    return AxiomReport(EFFICIENCY, float(gaps[worst]), f"coalition {coalition_label(worst)}")


def check_symmetry(
    v: Game, i: int, j: int, config: SolverConfig | None = None
) -> AxiomReport:
    """Exchanging two players' contributions must exchange their components
    under the induced coalition relabeling."""
    n = v.n_players
    check_player(i, n)
    check_player(j, n)
    swapped = decompose(swap_players(v, i, j), config)
    original = decompose(v, config)
    relabel = swap_indices(n, i, j)
    gaps = np.abs(swapped.component(i).values[relabel] - original.component(j).values)
    worst = int(np.argmax(gaps))
    return AxiomReport(
        SYMMETRY,
        float(gaps[worst]),
        f"players ({i},{j}), coalition {coalition_label(worst)}",
    )


def check_null_player(
    v: Game, i: int, config: SolverConfig | None = None
) -> AxiomReport:
    """A player with zero marginals must get the zero component, leave every
    other component flat in its direction, and drop out cleanly: the
    restricted game's decomposition must match under relabeling."""
    n = v.n_players
    b = check_player(i, n) - 1
    lower = masks_without_bit(n, b)
    upper = lower | (1 << b)
    if np.any(v.values[upper] != v.values[lower]):
        raise NotNullPlayer(f"player {i} has nonzero marginal contributions")
    d = decompose(v, config)
    zero_gap = float(np.max(np.abs(d.component(i).values)))
    worst_defect = zero_gap
    witness = f"player {i} component not identically zero"
    if n >= 2:
        restricted = decompose(restrict_game(v, i), config)
        for j in range(1, n + 1):
            if j == i:
                continue
            comp = d.component(j).values
            flat_gaps = np.abs(comp[upper] - comp[lower])
            j_restricted = j if j < i else j - 1
            restriction_gaps = np.abs(
                comp[lower] - restricted.component(j_restricted).values
            )
            for gaps, label in ((flat_gaps, "lift"), (restriction_gaps, "restriction")):
                worst = int(np.argmax(gaps))
                if gaps[worst] > worst_defect:
                    worst_defect = float(gaps[worst])
                    witness = (
                        f"player {j} {label} at coalition "
                        f"{coalition_label(int(lower[worst]))}"
                    )
    return AxiomReport(NULL_PLAYER, worst_defect, witness)


def check_linearity(
    v: Game, w: Game, alpha: float, beta: float, config: SolverConfig | None = None
) -> AxiomReport:
    """Decomposition must be linear in the game."""
    if v.n_players != w.n_players:
        raise ValueError("player counts differ")
    combined = decompose(alpha * v + beta * w, config)
    left = decompose(v, config)
    right = decompose(w, config)
    gaps = np.abs(
        combined.component_table()
        - alpha * left.component_table()
        - beta * right.component_table()
    )
    flat = int(np.argmax(gaps))
    player, mask = divmod(flat, gaps.shape[1])
    return AxiomReport(
        LINEARITY,
        float(gaps[player, mask]),
        f"player {player + 1}, coalition {coalition_label(mask)}",
    )


def check_reflection(d: Decomposition) -> AxiomReport:
    """Within each component, the value plus the value with the owner toggled
    in must be one constant; the defect is the worst per-player spread."""
    n = d.source.n_players
    worst_defect = 0.0
    witness = "no spread"
    for i in range(1, n + 1):
        b = i - 1
        lower = masks_without_bit(n, b)
        comp = d.component(i).values
        sums = comp[lower] + comp[lower | (1 << b)]
        spread = float(np.max(sums) - np.min(sums))
        if spread > worst_defect:
            worst_defect = spread
            witness = (
                f"player {i}, coalitions {coalition_label(int(lower[np.argmax(sums)]))} "
                f"vs {coalition_label(int(lower[np.argmin(sums)]))}"
            )
    return AxiomReport(REFLECTION, worst_defect, witness)


def _equivalent_pairs(v: Game) -> list[tuple[int, int]]:
    n = v.n_players
    pairs = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            free = [
                m
                for m in range(1 << n)
                if not m & bit_for(i) and not m & bit_for(j)
            ]
            if all(
                v.values[m | bit_for(i)] == v.values[m | bit_for(j)] for m in free
            ):
                pairs.append((i, j))
    return pairs


def _null_players(v: Game) -> list[int]:
    n = v.n_players
    out = []
    for i in range(1, n + 1):
        b = i - 1
        lower = masks_without_bit(n, b)
        if np.all(v.values[lower | (1 << b)] == v.values[lower]):
            out.append(i)
    return out


def check_classical_shapley(
    v: Game, other: Game | None = None, alpha: float = 2.0, beta: float = -0.5
) -> list[AxiomReport]:
    """The four classical allocation axioms against the direct formula.

    Symmetry runs on detected interchangeable pairs and the null check on
    detected null players (defect 0 when none exist).  Linearity probes the
    combination ``alpha*v + beta*other``; ``other`` defaults to the pure
    bargaining game.
    """
    n = v.n_players
    phi = shapley_direct(v).phi
    reports = [
        AxiomReport(
            SHAPLEY_EFFICIENCY,
            abs(float(np.sum(phi)) - v.grand_value()),
            "grand coalition total",
        )
    ]

    symmetry_defect, symmetry_witness = 0.0, "no interchangeable pairs"
    for i, j in _equivalent_pairs(v):
        gap = abs(float(phi[i - 1] - phi[j - 1]))
        if gap >= symmetry_defect:
            symmetry_defect, symmetry_witness = gap, f"players ({i},{j})"
    reports.append(AxiomReport(SHAPLEY_SYMMETRY, symmetry_defect, symmetry_witness))

    null_defect, null_witness = 0.0, "no null players"
    for i in _null_players(v):
        gap = abs(float(phi[i - 1]))
        if gap >= null_defect:
            null_defect, null_witness = gap, f"player {i}"
    reports.append(AxiomReport(SHAPLEY_NULL, null_defect, null_witness))

    if other is None:
        other = pure_bargaining(n)
    combined = shapley_direct(alpha * v + beta * other).phi
    gaps = np.abs(combined - alpha * phi - beta * shapley_direct(other).phi)
    worst = int(np.argmax(gaps))
    reports.append(
        AxiomReport(SHAPLEY_LINEARITY, float(gaps[worst]), f"player {worst + 1}")
    )
    return reports
