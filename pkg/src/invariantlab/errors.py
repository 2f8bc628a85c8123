"""Exception types shared across the toolkit."""


class InvariantLabError(Exception):
    """Base class for all toolkit errors."""


class DomainError(InvariantLabError):
    """A value lies outside the domain an operation is defined on."""


class SpecError(InvariantLabError):
    """A system spec or parameter set is invalid."""


class PreconditionError(InvariantLabError):
    """An operation was called with its stated precondition violated."""


class ConvergenceError(InvariantLabError):
    """An iterative solver failed to reach its residual target."""


class TickMismatchError(InvariantLabError):
    """Two range-liquidity states were compared across different tick grids."""


class GridError(InvariantLabError):
    """A discretization grid is empty or malformed."""
