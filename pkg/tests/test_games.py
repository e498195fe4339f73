import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgeshap import (
    Game,
    GameConstraintError,
    additive_game,
    basis_game,
    edge_game,
    lift_game,
    make_game,
    pure_bargaining,
    restrict_game,
    shapley_by_permutations,
    shapley_direct,
    swap_coalition,
    swap_players,
    zero_game,
)
from conftest import random_game


def brute_shapley(v: Game) -> np.ndarray:
    """Independent oracle: average marginal over explicitly enumerated
    joining orders, pure Python."""
    n = v.n_players
    phi = [0.0] * n
    count = 0
    for order in itertools.permutations(range(1, n + 1)):
        mask = 0
        for player in order:
            joined = mask | (1 << (player - 1))
            phi[player - 1] += v.values[joined] - v.values[mask]
            mask = joined
        count += 1
    return np.array(phi) / count


class Testconstruction:
    def test_make_game_zero(self):
        g = make_game(2, {(): 0})
        assert np.array_equal(g.values, np.zeros(4))

    def test_make_game_bargaining_entry(self):
        g = make_game(2, {(1, 2): 1})
        assert g == pure_bargaining(2)

    def test_make_game_single_player(self):
        g = make_game(1, {(1,): 5})
        assert g.value(()) == 0.0
        assert g.value((1,)) == 5.0

    def test_make_game_accepts_masks(self):
        assert make_game(2, {0b11: 1.0}) == pure_bargaining(2)

    def test_rejects_bad_player_count(self):
        with pytest.raises(ValueError):
            make_game(0, {})

    def test_rejects_nonzero_empty(self):
        with pytest.raises(GameConstraintError):
            make_game(2, {(): 1.0})

    def test_rejects_out_of_range_player(self):
        with pytest.raises(ValueError):
            make_game(2, {(3,): 1.0})

    def test_values_are_immutable(self):
        g = pure_bargaining(2)
        with pytest.raises(ValueError):
            g.values[1] = 7.0
        with pytest.raises(AttributeError):
            g.values = np.zeros(4)

    def test_game_algebra(self):
        v = additive_game([1.0, 2.0])
        w = pure_bargaining(2)
        assert (v + w).value((1, 2)) == 4.0
        assert (v - v) == zero_game(2)
        assert (2.0 * w).value((1, 2)) == 2.0


class TestFamilies:
    def test_pure_bargaining_two(self):
        g = pure_bargaining(2)
        assert list(g.values) == [0.0, 0.0, 0.0, 1.0]

    def test_pure_bargaining_one(self):
        assert pure_bargaining(1).value((1,)) == 1.0

    def test_pure_bargaining_three(self):
        g = pure_bargaining(3)
        assert g.value((1, 2, 3)) == 1.0
        assert np.count_nonzero(g.values) == 1

    def test_pure_bargaining_rejects_zero(self):
        with pytest.raises(ValueError):
            pure_bargaining(0)

    def test_basis_game(self):
        g = basis_game(2, {1})
        assert list(g.values) == [0.0, 1.0, 0.0, 0.0]
        assert basis_game(3, {1, 2, 3}) == pure_bargaining(3)
        assert basis_game(3, {2}).value((2,)) == 1.0

    def test_basis_game_rejects_empty_support(self):
        with pytest.raises(ValueError):
            basis_game(3, set())

    def test_edge_game(self):
        g = edge_game(2, {2}, 1)
        assert g.value((2,)) == 1.0 and g.value((1, 2)) == 1.0
        assert g.value((1,)) == 0.0
        g = edge_game(3, {1}, 3)
        assert g.value((1,)) == 1.0 and g.value((1, 3)) == 1.0
        g = edge_game(3, {2, 3}, 1)
        assert g.value((2, 3)) == 1.0 and g.value((1, 2, 3)) == 1.0

    def test_edge_game_rejects_member_player(self):
        with pytest.raises(ValueError):
            edge_game(3, {1, 2}, 1)

    def test_edge_game_rejects_empty_base(self):
        with pytest.raises(ValueError):
            edge_game(3, set(), 1)

    def test_edge_game_player_is_null(self):
        g = edge_game(4, {2, 4}, 3)
        for mask in range(1 << 4):
            if not mask & 0b0100:
                assert g.values[mask | 0b0100] == g.values[mask]

    def test_additive_game(self):
        assert additive_game([3.0]).value((1,)) == 3.0
        g = additive_game([1.0, 2.0])
        assert (g.value((1,)), g.value((2,)), g.value((1, 2))) == (1.0, 2.0, 3.0)
        assert additive_game([0.0, 0.0, 0.0]) == zero_game(3)


class TestTransforms:
    def test_swap_coalition_cases(self):
        assert swap_coalition({2}, 1, 2, 2) == 0b01
        assert swap_coalition({1, 2}, 1, 2, 2) == 0b11
        assert swap_coalition(set(), 1, 3, 3) == 0

    def test_swap_players_symmetric_game(self):
        g = pure_bargaining(3)
        assert swap_players(g, 1, 3) == g

    def test_swap_players_moves_singleton(self):
        g = make_game(2, {(1,): 1.0})
        assert swap_players(g, 1, 2) == make_game(2, {(2,): 1.0})

    def test_swap_players_identity(self, rng):
        g = random_game(4, rng)
        assert swap_players(g, 2, 2) == g

    @given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5))
    @settings(max_examples=30, deadline=None)
    def test_swap_players_involution(self, seed, i, j):
        gen = np.random.default_rng(seed)
        g = random_game(5, gen)
        assert swap_players(swap_players(g, i, j), i, j) == g

    def test_restrict_bargaining(self):
        assert restrict_game(pure_bargaining(3), 3) == zero_game(2)

    def test_restrict_additive(self):
        assert restrict_game(additive_game([1.0, 2.0, 4.0]), 2) == additive_game([1.0, 4.0])

    def test_restrict_edge_game(self):
        # enumerating subsets of {2,3}: only {2} keeps value 1, and the
        # survivors relabel to players {1,2}
        restricted = restrict_game(edge_game(3, {2}, 1), 1)
        assert restricted == basis_game(2, {1})

    def test_restrict_rejects_single_player(self):
        with pytest.raises(ValueError):
            restrict_game(pure_bargaining(1), 1)

    def test_lift_inverts_restrict(self, rng):
        g = random_game(3, rng)
        lifted = lift_game(g, 2)
        assert restrict_game(lifted, 2) == g
        # inserted player is null
        for mask in range(1 << 4):
            if not mask & 0b0010:
                assert lifted.values[mask | 0b0010] == lifted.values[mask]


class TestShapley:
    def test_bargaining_three_split(self):
        phi = shapley_direct(pure_bargaining(3))
        assert np.allclose(phi.phi, [1 / 3] * 3, atol=1e-15)

    def test_additive_direct(self):
        phi = shapley_direct(additive_game([1.0, 2.0]))
        assert np.allclose(phi.phi, [1.0, 2.0], atol=1e-15)

    def test_two_player_direct(self):
        # both joining orders: marginals (1, 2) and (3, 1) -> phi = (2, 1)
        g = make_game(2, {(1,): 1.0, (1, 2): 3.0})
        assert np.allclose(shapley_direct(g).phi, [2.0, 1.0], atol=1e-15)
        assert np.allclose(shapley_by_permutations(g).phi, [2.0, 1.0], atol=1e-15)

    def test_bargaining_two_permutations(self):
        phi = shapley_by_permutations(pure_bargaining(2))
        assert np.allclose(phi.phi, [0.5, 0.5], atol=1e-15)

    def test_additive_permutations(self):
        phi = shapley_by_permutations(additive_game([0.0, 7.0, 0.0]))
        assert np.allclose(phi.phi, [0.0, 7.0, 0.0], atol=1e-15)

    def test_permutation_cap(self):
        with pytest.raises(ValueError):
            shapley_by_permutations(zero_game(11))

    def test_direct_matches_brute_force(self, rng):
        for _ in range(5):
            g = random_game(4, rng)
            assert np.allclose(shapley_direct(g).phi, brute_shapley(g), atol=1e-12)

    def test_direct_matches_permutations(self, rng):
        for n in range(2, 9):
            g = random_game(n, rng)
            gap = np.abs(
                shapley_direct(g).phi - shapley_by_permutations(g).phi
            ).max()
            assert gap <= 1e-9

    def test_efficiency(self, rng):
        for n in (2, 4, 6):
            g = random_game(n, rng)
            assert abs(shapley_direct(g).total() - g.grand_value()) <= 1e-9

    def test_null_player_exact_in_permutations(self):
        g = edge_game(4, {2, 4}, 3)
        assert shapley_by_permutations(g)[3] == 0.0

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_linearity(self, seed):
        gen = np.random.default_rng(seed)
        v = random_game(4, gen)
        w = random_game(4, gen)
        alpha, beta = gen.uniform(-2, 2, size=2)
        combined = shapley_direct(alpha * v + beta * w).phi
        split = alpha * shapley_direct(v).phi + beta * shapley_direct(w).phi
        assert np.abs(combined - split).max() <= 1e-9

    def test_allocation_indexing(self):
        phi = shapley_direct(additive_game([1.0, 2.0]))
        assert phi[1] == pytest.approx(1.0)
        assert phi[2] == pytest.approx(2.0)
        with pytest.raises(ValueError):
            phi[3]
