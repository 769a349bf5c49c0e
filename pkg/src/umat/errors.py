"""Exception types raised by the material kernel, parser and drivers."""


class UmatError(Exception):
    """Base class for all package errors."""


class NonPositiveJacobian(UmatError):
    """det F <= 0: inverted or degenerate deformation."""


class InvalidPair(UmatError):
    """Fiber pair (alpha, beta) outside 1..3 or with beta < alpha."""


class LogDomain(UmatError):
    """Negative-log activation evaluated at w1*x >= 1.

    Drivers treat this as a failed load step rather than a fatal error.
    """


class UnknownInvariantSlot(UmatError):
    """A table row addresses an invariant slot that is not defined."""


class MissingPressure(UmatError):
    """An incompressible table was evaluated without a hydrostatic pressure."""


class IncompressibilityViolation(UmatError):
    """An incompressible table was evaluated at det F != 1."""


class ParseError(UmatError):
    """Malformed input deck. Carries the 1-based line and column."""

    def __init__(self, line, reason, col=1):
        self.line = line
        self.col = col
        self.reason = reason
        super().__init__(f"{line}:{col}: {reason}")


class UnknownPreset(UmatError):
    pass


class MissingParameter(UmatError):
    pass


class NonPositiveModulus(UmatError):
    pass


class NoConvergence(UmatError):
    """Newton iteration at a material point failed to converge."""

    def __init__(self, control, residual, iterations):
        self.control = control
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"no convergence at control value {control!r} after {iterations} "
            f"iterations (last residual {residual:.3e})"
        )


class StepFailure(UmatError):
    """The kernel could not evaluate a load step (e.g. log-domain blow-up)."""

    def __init__(self, control, cause):
        self.control = control
        self.cause = cause
        super().__init__(f"step failed at control value {control!r}: {cause}")


class InvalidTable(UmatError):
    """Structurally valid table that cannot be evaluated (e.g. J rows in an
    incompressible material)."""
