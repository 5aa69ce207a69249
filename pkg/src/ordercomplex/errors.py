"""Exception types raised across the package."""


class OrderComplexError(Exception):
    """Base class for all package errors."""


class InputRejected(OrderComplexError):
    """The request is outside what the tool accepts (bad descriptor, family guard)."""


class NonPrime(InputRejected, ValueError):
    pass


class SizeLimit(OrderComplexError):
    """A group would exceed the configured element cap."""


class NodeLimit(OrderComplexError):
    """A subgroup lattice would exceed the configured node cap."""


class SimplexLimit(OrderComplexError):
    """An order complex would exceed the configured simplex cap."""


class NotComparable(OrderComplexError, ValueError):
    pass


class NotAntichain(OrderComplexError):
    pass


class NotKlein(OrderComplexError, ValueError):
    pass


class Mismatch(OrderComplexError):
    """Two independently computed quantities disagree."""

    def __init__(self, message, **values):
        super().__init__(message)
        self.values = values


class ClassAnomaly(OrderComplexError):
    pass


class CensusMismatch(Mismatch):
    pass
