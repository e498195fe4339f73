"""End-to-end acceptance suite.

Each test covers one release criterion at its stated tolerance and prints a
single pass/fail line (run with ``pytest -s`` to see them inline).
"""

import resource
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np

from hodgeshap import (
    ChainConfig,
    SolverConfig,
    bargaining_closed_form,
    check_efficiency,
    check_linearity,
    check_null_player,
    check_reflection,
    check_symmetry,
    check_transition_formula,
    decompose,
    decompose_axiomatic,
    edge_game,
    estimate_value,
    exact_values,
    pure_bargaining,
    shapley_by_permutations,
    shapley_direct,
)
from hodgeshap.paths import estimate_efficiency_defect
from conftest import random_game
from test_axioms import perturb_component
from test_decompose import BARGAINING_2, BARGAINING_3


@contextmanager
def criterion(number, label):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number:>2} {label}: FAIL")
        raise
    elapsed = time.perf_counter() - start
    print(f"ACCEPTANCE {number:>2} {label}: PASS ({elapsed:.2f}s)")


def test_01_pure_bargaining_golden_values():
    with criterion(1, "pure bargaining golden values"):
        start = time.perf_counter()
        two = decompose(pure_bargaining(2))
        three = decompose(pure_bargaining(3))
        for player, expected in BARGAINING_2.items():
            assert np.abs(two.component(player).values - expected).max() <= 1e-10
        for player, expected in BARGAINING_3.items():
            assert np.abs(three.component(player).values - expected).max() <= 1e-10
        assert time.perf_counter() - start < 1.0


def test_02_closed_form_consistency():
    with criterion(2, "closed form vs least squares, n=1..10"):
        start = time.perf_counter()
        for n in range(1, 11):
            gap = np.abs(
                bargaining_closed_form(n).component_table()
                - decompose(pure_bargaining(n)).component_table()
            ).max()
            assert gap <= 1e-10, f"n={n}: gap {gap:.3e}"
        assert time.perf_counter() - start < 10.0


def test_03_shapley_coincidence():
    with criterion(3, "grand coalition equals Shapley on 200 random games"):
        rng = np.random.default_rng(301)
        for trial in range(200):
            n = int(rng.integers(2, 9))
            g = random_game(n, rng)
            d = decompose(g)
            direct = shapley_direct(g).phi
            grand = np.array([c.values[-1] for c in d.components])
            assert np.abs(grand - direct).max() <= 1e-9, f"trial {trial}"
            permuted = shapley_by_permutations(g).phi
            assert np.abs(direct - permuted).max() <= 1e-9, f"trial {trial}"


def test_04_axiom_suite():
    with criterion(4, "axioms A1-A5 on 200 random games plus fault injection"):
        rng = np.random.default_rng(401)
        for trial in range(200):
            n = int(rng.integers(2, 9))
            g = random_game(n, rng)
            d = decompose(g)
            assert check_efficiency(g, d).max_defect <= 1e-9
            assert check_reflection(d).max_defect <= 1e-9
            i = int(rng.integers(1, n + 1))
            j = int(rng.integers(1, n + 1))
            assert check_symmetry(g, i, j).max_defect <= 1e-9
            w = random_game(n, rng)
            alpha, beta = rng.uniform(-2, 2, size=2)
            assert check_linearity(g, w, alpha, beta).max_defect <= 1e-9
            probe = edge_game(n, {2}, 1)
            assert check_null_player(probe, 1).max_defect <= 1e-9
        # a 1e-3 perturbation of any single component entry must be noticed
        g = random_game(5, np.random.default_rng(402))
        d = decompose(g)
        eta = 1e-3
        for mask in (0b00001, 0b10101, 0b11111):
            corrupted = perturb_component(d, 3, mask, eta)
            worst = max(
                check_efficiency(g, corrupted).max_defect,
                check_reflection(corrupted).max_defect,
            )
            assert worst >= 5e-4


def test_05_walk_oracle_equivalence():
    with criterion(5, "expected walk contributions equal components"):
        start = time.perf_counter()
        rng = np.random.default_rng(501)
        for trial in range(50):
            n = int(rng.integers(2, 7))
            g = random_game(n, rng)
            table = decompose(g).component_table()
            for target in range(1 << n):
                oracle = exact_values(g, target)[:, 0]
                gap = np.abs(oracle - table[:, target]).max()
                assert gap <= 1e-9, f"trial {trial}, target {target}"
        assert time.perf_counter() - start < 60.0


def test_06_monte_carlo_convergence():
    with criterion(6, "Monte Carlo bands and per-path efficiency at 1e6 samples"):
        start = time.perf_counter()
        g = pure_bargaining(3)
        config = ChainConfig(n_players=3, seed=600)
        samples = 1_000_000
        expectations = {0b001: 1 / 12, 0b110: -1 / 4, 0b111: 1 / 3}
        for target, expected in expectations.items():
            estimate = estimate_value(g, 1, target, config, samples)
            assert abs(estimate.mean - expected) <= 4 * estimate.std_error, (
                f"target {target:#b}: {estimate.mean} vs {expected} "
                f"+- {estimate.std_error}"
            )
            # same seed, same sample indices: these are exactly the paths the
            # estimate used, and the game is integer-valued
            assert estimate_efficiency_defect(g, target, config, samples) == 0.0
        assert time.perf_counter() - start < 120.0


def test_07_transition_formula():
    with criterion(7, "transition formula on 100 random instances"):
        rng = np.random.default_rng(701)
        for trial in range(100):
            n = int(rng.integers(2, 6))
            g = random_game(n, rng)
            i = int(rng.integers(1, n + 1))
            s = int(rng.integers(0, 1 << n))
            t = int(rng.integers(0, 1 << n))
            defect = check_transition_formula(g, i, s, t)
            assert defect <= 1e-10, f"trial {trial}: defect {defect:.3e}"


def test_08_cross_oracle_triangle():
    with criterion(8, "CG, dense, and axiomatic routes agree pairwise"):
        rng = np.random.default_rng(801)
        for trial in range(50):
            n = int(rng.integers(2, 7))
            g = random_game(n, rng)
            cg = decompose(g, SolverConfig(method="cg")).component_table()
            dense = decompose(g, SolverConfig(method="dense")).component_table()
            axiomatic = decompose_axiomatic(g).component_table()
            assert np.abs(cg - dense).max() <= 1e-9, f"trial {trial}"
            assert np.abs(cg - axiomatic).max() <= 1e-9, f"trial {trial}"
            assert np.abs(dense - axiomatic).max() <= 1e-9, f"trial {trial}"


def test_09_performance_sixteen_players():
    with criterion(9, "16-player decomposition under 10s and 1 GiB"):
        g = random_game(16, np.random.default_rng(901))
        start = time.perf_counter()
        d = decompose(g)
        elapsed = time.perf_counter() - start
        assert max(d.residual_norms) <= 1e-12
        assert elapsed <= 10.0, f"took {elapsed:.2f}s"
        peak_kb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
        assert peak_kb <= 1 << 20, f"peak RSS {peak_kb / 1024:.0f} MiB"


def test_10_determinism():
    with criterion(10, "fixed seed is bitwise stable across runs and workers"):
        argv = [
            sys.executable,
            "-m",
            "hodgeshap.cli",
            "simulate",
            "--generate",
            "bargaining",
            "3",
            "--target",
            "{1,2,3}",
            "--samples",
            "50000",
            "--seed",
            "1234",
        ]
        first = subprocess.run(argv, capture_output=True, check=True)
        second = subprocess.run(argv, capture_output=True, check=True)
        assert first.stdout == second.stdout
        assert first.stdout.strip()

        g = pure_bargaining(3)
        config = ChainConfig(n_players=3, seed=1234)
        serial = estimate_value(g, 2, 0b111, config, 120_000, workers=1)
        threaded = estimate_value(g, 2, 0b111, config, 120_000, workers=4)
        assert serial == threaded
