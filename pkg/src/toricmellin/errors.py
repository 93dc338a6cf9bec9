"""Exception hierarchy shared by all modules."""


class ToricMellinError(Exception):
    """Base class for errors raised by this package."""


class DomainError(ToricMellinError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DivergenceError(DomainError):
    """An integral that the operation needs does not converge (e.g. ``N x_i <= -1``)."""


class NonConvergenceError(ToricMellinError, ArithmeticError):
    """A numerical refinement loop ran out of budget before agreeing with itself."""


class GeometryError(ToricMellinError, ValueError):
    """Empty, unbounded or degenerate polytope."""


class ValidityError(DomainError):
    """Asymptotic predictor evaluated outside the parameter range where it applies."""


class UnsupportedError(ToricMellinError, NotImplementedError):
    """Requested configuration is outside what the implementation covers."""


class DerivativeCapabilityError(UnsupportedError):
    """A test function cannot supply derivatives of the requested order."""
