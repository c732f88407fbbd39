"""Exception types raised by memcap."""


class MemcapError(Exception):
    """Base class for all library errors."""


class DomainError(MemcapError, ValueError):
    """An argument lies outside the domain of the operation."""


class PhysicalityError(MemcapError, ArithmeticError):
    """A covariance matrix violates the uncertainty principle or is not positive definite."""


class ConvergenceError(MemcapError, ArithmeticError):
    """An iterative routine exhausted its iteration budget."""
