"""Exception types shared across the package."""

from __future__ import annotations


class QuadratureConvergenceError(RuntimeError):
    """An integral failed to reach the requested tolerance.

    Carries the best value obtained so far in ``partial_value`` together
    with its estimated error so callers can decide whether to use it.
    """

    def __init__(self, message: str, partial_value: float, error_estimate: float):
        super().__init__(message)
        self.partial_value = partial_value
        self.error_estimate = error_estimate


class DegenerateEvolutionError(ValueError):
    """The qubit does not evolve at all (no Hamiltonian, no dephasing)."""
