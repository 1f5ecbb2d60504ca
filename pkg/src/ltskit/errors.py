"""Shared error types for search budgets and extension validation."""


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""

    def __init__(self, needed: int, budget: int):
        self.needed = needed
        self.budget = budget
        super().__init__(f"search space of size {needed} exceeds budget {budget}")


class SearchUnsupportedError(RuntimeError):
    """Witness search requested over a field with no finite enumeration."""


class ExtensionError(ValueError):
    """Extension data violates a structural invariant."""
