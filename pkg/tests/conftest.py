import numpy as np
import pytest

from hodgeshap import Game


def random_game(n: int, rng: np.random.Generator, scale: float = 1.0) -> Game:
    values = rng.uniform(-scale, scale, size=1 << n)
    values[0] = 0.0
    return Game(n, values)


def integer_game(n: int, rng: np.random.Generator, span: int = 5) -> Game:
    values = rng.integers(-span, span + 1, size=1 << n).astype(np.float64)
    values[0] = 0.0
    return Game(n, values)


@pytest.fixture
def rng():
    return np.random.default_rng(20210913)
