class InputError(ValueError):
    """Malformed input: wrong shape, NaN entries, out-of-range parameters."""


class InvalidSpaceError(InputError):
    """A distance matrix that is not a pseudo-quasi-metric.

    ``violation`` carries the failing property and a witness, see
    :func:`quasiph.spaces.find_violation`.
    """

    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class GuardExceeded(RuntimeError):
    """Exact Gromov-Hausdorff computation refused because the inputs are too large."""
