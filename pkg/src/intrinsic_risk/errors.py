"""Exception hierarchy shared by every module."""


class RiskError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(RiskError, ValueError):
    """Shapes or structural flags do not fit together."""


class DomainError(RiskError, ValueError):
    """A scalar argument lies outside its admissible range."""


class PreconditionError(RiskError, ValueError):
    """An operation was called outside the hypotheses it relies on."""


class InputError(RiskError):
    """A scenario, acceptance-set or measure file could not be parsed."""


class NumericalError(RiskError, RuntimeError):
    """A numerical search ended in a state the theory rules out."""
