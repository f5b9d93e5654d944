"""Exception hierarchy. The CLI maps each class to a stable exit code."""


class OAError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ConfigError(OAError, ValueError):
    """Invalid parameters or conflicting options."""

    exit_code = 2


class CapExceededError(OAError):
    """A row, cell or work cap would be exceeded."""

    exit_code = 3


class SearchExhaustedError(OAError):
    """A search interval was exhausted without finding a solution."""

    exit_code = 4


class BudgetExceededError(SearchExhaustedError):
    """A rejection-sampling loop ran out of attempts."""
