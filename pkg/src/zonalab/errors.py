"""Exception types shared across the package.

The CLI maps these onto exit codes: usage errors are handled by argparse
(exit 2), DomainError/PreconditionError exit 3, ResourceError exit 4.
"""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(ValueError):
    """A documented precondition of an operation is violated."""


class ResourceError(RuntimeError):
    """The requested computation would exceed the intended desk scale."""
