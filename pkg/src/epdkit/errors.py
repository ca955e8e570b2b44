"""Exception types shared across the package."""


class EpdError(Exception):
    """Base class for numeric failures raised by epdkit."""


class DomainError(EpdError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """A Gamma pole or an inadmissible EPD parameter was requested."""

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class BracketError(DomainError):
    """A root bracket does not contain a sign change."""


class RegimeError(EpdError):
    """An evaluation route was used outside the regime where it is accurate."""


class IncompatibleError(DomainError):
    """Two snapshots fail the compatibility condition."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
