"""Shared budget knobs.

Expensive enumerations (coset tables, group closures) take an explicit
``budget`` argument; when the caller passes None the default below applies.
ABELSLAB_BUDGET overrides the default globally.
"""

import os

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its element or coset budget."""


def get_budget(budget=None):
    if budget is not None:
        return int(budget)
    env = os.environ.get("ABELSLAB_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET
