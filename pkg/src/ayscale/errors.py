"""Shared exception types."""


class BudgetExceededError(RuntimeError):
    """A run would exceed its configured memory or time budget."""
