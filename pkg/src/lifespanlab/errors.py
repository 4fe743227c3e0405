"""Exception types shared across the laboratory.

Two failure families matter to callers: bad configuration (rejected before
any numerics run) and numerical breakdown (a run that started but cannot
produce a usable result). The CLI maps them to exit codes 1 and 2.
"""


class ConfigError(ValueError):
    """Invalid parameters, grids, or profiles; nothing was computed."""


class GridBudgetError(ConfigError):
    """Requested grid exceeds the configured node budget."""

    def __init__(self, count: int, budget: int, suggested_dr: float):
        self.count = count
        self.budget = budget
        self.suggested_dr = suggested_dr
        super().__init__(
            f"grid needs {count} nodes, budget is {budget}; "
            f"use dr >= {suggested_dr:.6g}"
        )


class NumericalError(RuntimeError):
    """A computation ran but failed (overflow, no usable data, bad fit)."""


class NonFiniteError(NumericalError):
    """A field stopped being finite before the blow-up guard triggered."""


class InsufficientDataError(NumericalError):
    """Not enough successful records to perform the requested fit."""
