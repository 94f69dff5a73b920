"""Enumeration budgets shared by every exhaustive routine."""

import os

DEFAULT_BUDGET = int(os.environ.get("FLAGDESCENT_BUDGET", 2_000_000))


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured budget."""

    def __init__(self, what, needed, budget):
        super().__init__(f"{what}: {needed} items exceeds budget {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


def check_budget(what, needed, budget=None):
    budget = DEFAULT_BUDGET if budget is None else budget
    if needed > budget:
        raise BudgetExceeded(what, needed, budget)


def current_budget():
    return DEFAULT_BUDGET


def set_default_budget(n):
    """Change the budget used when callers pass none (returns the old value)."""
    global DEFAULT_BUDGET
    if n <= 0:
        raise ValueError("budget must be positive")
    old, DEFAULT_BUDGET = DEFAULT_BUDGET, int(n)
    return old
