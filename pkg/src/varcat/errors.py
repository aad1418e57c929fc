"""Exception types shared across the package."""


class VarcatError(Exception):
    """Base class for all errors raised by varcat."""


class ImproperIdeal(VarcatError):
    pass


class NonInvertibleDenominator(VarcatError, ZeroDivisionError):
    pass


class SourceTargetMismatch(VarcatError):
    pass


class NotWellDefined(VarcatError):
    """A coordinate tuple does not send the source variety into the target."""


class NotDominant(VarcatError):
    pass


class NoProbeFound(VarcatError):
    """No pair of admissible primes with smooth rational points below the bound."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class PointSetCapExceeded(VarcatError):
    pass


class PowerBudgetExceeded(VarcatError):
    """Symbolic powering of a morphism grew beyond the configured term cap."""


class BudgetExceeded(VarcatError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InternalCapExceeded(VarcatError):
    """A closure exceeded a bound that the reconstruction argument guarantees.

    Always an implementation fault, never a mathematical outcome.
    """


class InvalidWitness(VarcatError):
    pass


class ParseError(VarcatError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position


class UnknownVariable(ParseError):
    def __init__(self, name, position=None):
        super().__init__(f"unknown variable {name!r}", position)
        self.name = name


class DocumentError(VarcatError):
    """Malformed input document."""


class PointNotOnVariety(VarcatError):
    pass


class IncompleteOrbit(VarcatError):
    pass
