"""Exception types shared across the package.

The CLI maps these onto process exit codes: invalid arguments exit with 2,
degenerate inputs (inputs that are structurally valid but cannot be
processed, e.g. a fully lost image) exit with 3.
"""


class FsmrError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(FsmrError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateInputError(FsmrError, RuntimeError):
    """Input is well-formed but carries too little information to process."""


class NoSelectableAtomError(FsmrError, RuntimeError):
    """No basis function can be estimated from the given sample set."""
