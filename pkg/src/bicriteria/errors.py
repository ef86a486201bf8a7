"""Exception types shared across the package."""

from __future__ import annotations


class GraphError(ValueError):
    """Malformed graph, edge set, or parse tree."""


class NotATreeError(GraphError):
    """Edge set is cyclic or disconnected."""


class CostOverflowError(OverflowError):
    """An aggregated cost left the 64-bit range."""


class InfeasibleError(Exception):
    """No solution satisfies the requested bound.

    ``certificate`` optionally carries whatever evidence the raising
    routine collected (e.g. center pairs with no bounded path).
    """

    def __init__(self, message: str = "NO SOLUTION", certificate=None):
        super().__init__(message)
        self.certificate = certificate


class CapExceededError(Exception):
    """Instance too large for brute-force enumeration."""
