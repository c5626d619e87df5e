"""Exception hierarchy shared by the library and the CLI."""


class PeanoQuadError(Exception):
    """Base class for all library errors."""


class DomainError(PeanoQuadError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class MissingInputError(PeanoQuadError, ValueError):
    """A certificate was requested without the data needed to make it rigorous."""


class ConvergenceError(PeanoQuadError, RuntimeError):
    """An adaptive routine ran out of budget before meeting its tolerance."""


class NonConvergenceError(ConvergenceError):
    """Certified integration stopped at ``max_panels``; carries the partial result."""

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


class UnknownNameError(PeanoQuadError, KeyError):
    """Unknown claim id, integrand name or family name."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""
