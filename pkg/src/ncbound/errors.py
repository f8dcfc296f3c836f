"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class NoSolution(RuntimeError):
    """The self-consistency equation has no fixed point for this level.

    Raised when the coupling exceeds the level's critical value, i.e. the
    bound state does not exist.
    """

    def __init__(self, message, n=None, l=None, g=None):
        super().__init__(message)
        self.n = n
        self.l = l
        self.g = g


class NonConvergence(RuntimeError):
    """An iterative routine exhausted its budget before meeting tolerance."""


class RepresentationMismatch(AssertionError):
    """A commutator of the operator representation is not a c-number."""
