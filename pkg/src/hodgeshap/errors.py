"""Exception types shared across the package."""

from __future__ import annotations


class GameFormatError(ValueError):
    """A game or decomposition document is syntactically malformed."""


class GameConstraintError(ValueError):
    """A structurally valid document violates a game constraint
    (nonzero empty-coalition value, out-of-range player, bad player count)."""


class SolverError(RuntimeError):
    """Base class for linear-solver failures."""


class NonConvergence(SolverError):
    """The iterative solver hit its iteration cap before reaching tolerance."""

    def __init__(self, message: str, player: int | None = None):
        super().__init__(message)
        self.player = player


class InconsistentRHS(SolverError):
    """The right-hand side is not orthogonal to constants, so the singular
    system has no solution."""


class SolveFailure(SolverError):
    """A direct or iterative linear solve left a residual above tolerance."""


class StepCapExceeded(RuntimeError):
    """A sampled walk reached the per-sample step cap before hitting its
    target coalition."""

    def __init__(self, message: str, sample_index: int | None = None):
        super().__init__(message)
        self.sample_index = sample_index


class NotNullPlayer(ValueError):
    """A null-player check was requested for a player with nonzero marginals."""
