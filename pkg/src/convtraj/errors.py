"""Exception hierarchy shared across the package.

BadInputError maps to CLI exit code 2, NumericalError to exit code 3.
"""


class ConvtrajError(Exception):
    """Base class for all package-specific errors."""


class BadInputError(ConvtrajError):
    """Malformed or inconsistent user input (files, specs, arguments)."""


class DegenerateSpanError(BadInputError):
    """Input points do not affinely span the expected dimension."""


class IdenticallyZeroError(ConvtrajError):
    """A polynomial that must have isolated roots is identically zero."""


class NumericalError(ConvtrajError):
    """A numerical routine failed to reach its accuracy or termination goal."""


class InfeasibleError(NumericalError):
    """Linear program has no feasible point."""


class UnboundedError(NumericalError):
    """Linear program objective is unbounded on the feasible set."""


class IntegrationError(NumericalError):
    """ODE integration failed (step size underflow or similar)."""
