"""Exception types shared across the package."""


class ParafermionError(Exception):
    """Base class for all package errors."""


class DomainError(ParafermionError, ValueError):
    """An input lies outside the domain of the requested operation."""


class NoSolutionError(ParafermionError):
    """The linear relations admit no non-trivial real solution."""


class DegenerateSolutionError(ParafermionError):
    """The solution space of the linear relations is more than one-dimensional."""


class BudgetExceededError(ParafermionError):
    """An enumeration would exceed its configured step budget."""
