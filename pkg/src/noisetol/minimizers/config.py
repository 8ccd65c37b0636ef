from __future__ import annotations

from dataclasses import dataclass


class SolverError(RuntimeError):
    """A minimizer could not produce a solution."""


class ConvergenceError(SolverError):
    pass


class UnboundedObjectiveError(SolverError):
    """The objective has no minimizer (infimum approached only at infinity)."""


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by the iterative minimizers.

    ``max_iters`` is the annealing chain length for the 0-1 search and the
    Newton/bisection iteration cap for the smooth solvers.
    """

    max_iters: int = 20000
    tol: float = 1e-9
    restarts: int = 5
    seed: int = 0
    anneal_schedule: tuple = (1.0, 0.995)

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        t0, decay = self.anneal_schedule
        if not t0 > 0:
            raise ValueError("initial temperature must be > 0")
        if not 0 < decay < 1:
            raise ValueError("anneal decay must lie in (0, 1)")
        object.__setattr__(self, "anneal_schedule", (float(t0), float(decay)))

    def replace(self, **changes) -> "SolverConfig":
        from dataclasses import replace

        return replace(self, **changes)
