"""Exception taxonomy shared by every module and surfaced by the CLI."""


class ChainError(ValueError):
    """Base class for invalid chain, generator or spec input."""


class NotSquare(ChainError):
    def __init__(self, shape):
        super().__init__(f"matrix must be square, got shape {tuple(shape)}")
        self.shape = tuple(shape)


class NegativeEntry(ChainError):
    def __init__(self, i, j, value):
        super().__init__(f"negative entry {value!r} at ({i + 1}, {j + 1})")
        self.i, self.j, self.value = i, j, value


class RowSumViolation(ChainError):
    def __init__(self, i, total):
        super().__init__(f"row {i + 1} sums to {total!r}, not 1")
        self.i, self.total = i, total


class Reducible(ChainError):
    def __init__(self, message="transition graph is not strongly connected"):
        super().__init__(message)


class NonpositiveSojourn(ChainError):
    def __init__(self, i, value):
        super().__init__(f"mean sojourn time of state {i + 1} is {value!r}; must be > 0")
        self.i, self.value = i, value


class InvalidMoments(ChainError):
    """Holding-time moments inconsistent with the transition matrix."""


class ZeroDiagonal(ChainError):
    def __init__(self, i, value):
        super().__init__(f"generator diagonal q[{i + 1},{i + 1}] = {value!r}; "
                         "state is absorbing or unstable")
        self.i, self.value = i, value


class InvalidGenerator(ChainError):
    """Off-diagonal rate negative or row not summing to zero."""


class SpecFormatError(ChainError):
    """Malformed spec file. ``line`` is 1-based when it can be located."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class Singular(ArithmeticError):
    """A linear system that should be nonsingular broke down numerically."""


class SingularSystem(Singular):
    """The stationary system was singular (internal inconsistency)."""


class DegenerateU(ValueError):
    def __init__(self, total):
        super().__init__(f"u^T e = {total!r} is too close to zero")
        self.total = total


class RouteMismatch(ValueError):
    """A g-inverse was applied to a chain it was not built for."""


class NoConvergence(ArithmeticError):
    """Eigenvalue iteration failed to converge."""
