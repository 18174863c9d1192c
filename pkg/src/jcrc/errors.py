"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Raised for out-of-range graph, code or construction parameters."""


class DegenerateInput(ValueError):
    """Raised when an operation is undefined for a trivial input."""


class LloydViolation(ValueError):
    """The matrix is not annihilated by rho+1 eigenvalues of the graph."""

    def __init__(self, message, roots=()):
        super().__init__(message)
        self.roots = tuple(roots)


class NonIntegralSizes(ValueError):
    """Cell sizes implied by an intersection matrix are not positive integers."""

    def __init__(self, message, sizes=()):
        super().__init__(message)
        self.sizes = tuple(sizes)


class MissingMinEigenvalue(ValueError):
    """The code's spectrum does not contain the minimum eigenvalue -w."""


class ProfileMismatch(AssertionError):
    """Direct enumeration contradicts the derived clique constants."""


class MapsToZero(ValueError):
    """The minimum eigenvalue has no image: the clique-sum transform kills it."""


class InconsistentProfile(ValueError):
    """Facet counts of two vertices rule out a constant membership profile.

    ``witnesses`` holds two vertex bitmasks that would both have to lie in the
    same cell while containing different numbers of facets from the code.
    """

    def __init__(self, message, witnesses=(), counts=()):
        super().__init__(message)
        self.witnesses = tuple(witnesses)
        self.counts = tuple(counts)


class BudgetExhausted(RuntimeError):
    """The search ran out of nodes before exhausting the tree."""

    def __init__(self, message, stats=None, partial=()):
        super().__init__(message)
        self.stats = stats
        self.partial = list(partial)


class CodeFileError(ValueError):
    """Malformed code file; the message names the line and field."""
