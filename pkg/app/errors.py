"""Domain exceptions.

Input problems subclass :class:`ValueError` so routers and the CLI can map
them to "invalid input" in one place; exhausted budgets and internal
inconsistencies subclass :class:`RuntimeError`.
"""

from typing import Any, Optional


class KernelError(ValueError):
    """Invalid kernel data or a violated kernel precondition."""


class GraphError(ValueError):
    """Invalid graph data, or a graph that violates a precondition (e.g. disconnected)."""


class TreeError(ValueError):
    """Malformed tree code or a tree that does not fit the requested depth."""


class BudgetExceededError(RuntimeError):
    """An iteration or resampling budget ran out before the computation finished."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.details: dict[str, Any] = details or {}


class InconsistentKernelError(RuntimeError):
    """A derived quantity contradicts the kernel's own structure."""
