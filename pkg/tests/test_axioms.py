import numpy as np
import pytest

from hodgeshap import (
    Decomposition,
    Game,
    NotNullPlayer,
    additive_game,
    basis_game,
    check_classical_shapley,
    check_efficiency,
    check_linearity,
    check_null_player,
    check_reflection,
    check_symmetry,
    decompose,
    decompose_axiomatic,
    edge_game,
    pure_bargaining,
    zero_game,
)
from conftest import random_game


def perturb_component(d: Decomposition, player: int, mask: int, delta: float) -> Decomposition:
    values = d.component(player).values.copy()
    values[mask] += delta
    components = list(d.components)
    components[player - 1] = Game(d.source.n_players, values)
    return Decomposition(d.source, tuple(components), d.residual_norms)


class TestEfficiency:
    def test_bargaining_two(self):
        g = pure_bargaining(2)
        assert check_efficiency(g, decompose(g)).max_defect <= 1e-12

    def test_zero_game(self):
        g = zero_game(3)
        assert check_efficiency(g, decompose(g)).max_defect == 0.0

    def test_detects_injected_fault(self):
        g = pure_bargaining(3)
        d = perturb_component(decompose(g), 1, 0b001, 0.1)
        report = check_efficiency(g, d)
        assert report.max_defect == pytest.approx(0.1, abs=1e-10)
        assert "{1}" in report.witness


class TestSymmetry:
    def test_symmetric_game(self):
        for i, j in ((1, 2), (1, 3), (2, 3)):
            assert check_symmetry(pure_bargaining(3), i, j).max_defect <= 1e-10

    def test_random_game(self, rng):
        g = random_game(4, rng)
        assert check_symmetry(g, 1, 3).max_defect <= 1e-9

    def test_identity_swap(self, rng):
        g = random_game(3, rng)
        assert check_symmetry(g, 2, 2).max_defect == 0.0


class TestNullPlayer:
    def test_edge_game(self):
        assert check_null_player(edge_game(3, {2}, 1), 1).max_defect <= 1e-10

    def test_zero_weight_additive_player(self):
        report = check_null_player(additive_game([0.0, 3.0]), 1)
        assert report.max_defect <= 1e-12

    def test_rejects_non_null_player(self):
        with pytest.raises(NotNullPlayer):
            check_null_player(pure_bargaining(3), 1)

    def test_zero_component_is_exact(self):
        d = decompose(additive_game([0.0, 3.0]))
        assert not np.any(d.component(1).values)


class TestLinearity:
    def test_cancellation(self, rng):
        g = random_game(3, rng)
        assert check_linearity(g, g, 1.0, -1.0).max_defect <= 1e-10

    def test_mixed_games(self):
        report = check_linearity(pure_bargaining(3), basis_game(3, {1, 2}), 2.0, -3.0)
        assert report.max_defect <= 1e-9

    def test_homogeneity(self, rng):
        g = random_game(3, rng)
        assert check_linearity(g, zero_game(3), 1.75, 0.0).max_defect <= 1e-10

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            check_linearity(random_game(3, rng), random_game(2, rng), 1.0, 1.0)


class TestReflection:
    def test_bargaining_two(self):
        # both membership-toggled sums equal 1/4 for player 1
        assert check_reflection(decompose(pure_bargaining(2))).max_defect <= 1e-12

    def test_additive(self):
        d = decompose(additive_game([1.0, -2.0]))
        assert check_reflection(d).max_defect <= 1e-12

    def test_random_game(self, rng):
        assert check_reflection(decompose(random_game(5, rng))).max_defect <= 1e-9


class TestClassicalShapley:
    def test_bargaining(self):
        reports = {r.axiom: r for r in check_classical_shapley(pure_bargaining(4))}
        assert all(r.max_defect <= 1e-12 for r in reports.values())
        assert reports["shapley-symmetry"].witness != "no interchangeable pairs"

    def test_additive_null(self):
        reports = {r.axiom: r for r in check_classical_shapley(additive_game([0.0, 2.0]))}
        assert reports["shapley-null"].max_defect == 0.0
        assert reports["shapley-null"].witness == "player 1"

    def test_random_efficiency(self, rng):
        reports = {r.axiom: r for r in check_classical_shapley(random_game(6, rng))}
        assert reports["shapley-efficiency"].max_defect <= 1e-10


class TestSuiteProperties:
    def test_full_suite_on_random_games(self, rng):
        for n in (2, 3, 5, 8):
            g = random_game(n, rng)
            d = decompose(g)
            assert check_efficiency(g, d).max_defect <= 1e-9
            assert check_reflection(d).max_defect <= 1e-9
            i, j = 1, n
            assert check_symmetry(g, i, j).max_defect <= 1e-9
            w = random_game(n, rng)
            assert check_linearity(g, w, 0.7, -1.3).max_defect <= 1e-9
            if n >= 2:
                assert check_null_player(edge_game(n, {2}, 1), 1).max_defect <= 1e-9

    def test_fault_injection_detected(self, rng):
        g = random_game(4, rng)
        d = decompose(g)
        eta = 1e-3
        for mask in (0b0001, 0b1010, 0b1111):
            corrupted = perturb_component(d, 2, mask, eta)
            defects = [
                check_efficiency(g, corrupted).max_defect,
                check_reflection(corrupted).max_defect,
            ]
            assert max(defects) >= eta / 2

    def test_uniqueness_probe(self, rng):
        # a decomposition passing the axioms with small defect must be close
        # to the axiomatic construction
        for _ in range(5):
            g = random_game(4, rng)
            d = decompose(g)
            epsilon = max(
                check_efficiency(g, d).max_defect,
                check_reflection(d).max_defect,
                max(d.residual_norms),
            )
            gap = np.abs(
                d.component_table() - decompose_axiomatic(g).component_table()
            ).max()
            assert gap <= max(1e3 * epsilon, 1e-12)

    def test_reports_carry_witnesses(self, rng):
        g = random_game(3, rng)
        for report in check_classical_shapley(g):
            assert isinstance(report.witness, str) and report.witness
        assert check_efficiency(g, decompose(g)).witness.startswith("coalition")

    def test_within_threshold_helper(self, rng):
        g = random_game(3, rng)
        report = check_efficiency(g, decompose(g))
        assert report.within(1e-9)
        assert not report.within(0.0) or report.max_defect == 0.0
