"""Exception types shared across the package."""

from __future__ import annotations


class PisanoError(Exception):
    """Base class for every error raised by kpisano."""


class ArithmeticOverflowError(PisanoError, OverflowError):
    """A value left the supported unsigned 64-bit range."""


class NotInvertibleError(PisanoError, ValueError):
    def __init__(self, a: int, m: int, gcd: int):
        self.a = a
        self.m = m
        self.gcd = gcd
        super().__init__(f"{a} is not invertible modulo {m} (gcd={gcd})")


class DomainError(PisanoError, ValueError):
    """Argument outside the domain an operation is defined on."""


class NoConvergenceError(PisanoError):
    """A trajectory did not reach a fixed point or the two-cycle in time."""

    def __init__(self, trajectory):
        self.trajectory = trajectory
        super().__init__(
            f"trajectory of {trajectory.start} did not terminate within "
            f"{len(trajectory.steps) - 1} iterations"
        )


class InvariantViolation(PisanoError):
    """A structural property that must always hold was observed to fail."""
