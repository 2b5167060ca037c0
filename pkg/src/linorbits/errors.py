"""Typed errors shared across the package."""


class LinorbitsError(Exception):
    """Base class for all package errors."""


class DivisionByZero(LinorbitsError, ZeroDivisionError):
    """Inversion of the zero field element."""


class FieldMismatch(LinorbitsError, ValueError):
    """Operands live over different fields."""


class ShapeMismatch(LinorbitsError, ValueError):
    """Matrix shapes incompatible with the requested operation."""


class DimensionTooLarge(LinorbitsError, ValueError):
    """Matrix dimension exceeds the configured cap."""


class NonUnipotent(LinorbitsError, ValueError):
    """Jordan type requested for a matrix that is not unipotent."""


class SpaceTooLarge(LinorbitsError, ValueError):
    """q^d exceeds the vector-enumeration cap; raise the cap explicitly to proceed."""


class GroupTooLarge(LinorbitsError, ValueError):
    """Element enumeration exceeds the configured cap."""


class TooManySubsets(LinorbitsError, ValueError):
    """Subset-orbit enumeration exceeds the configured cap."""


class NoLift(LinorbitsError, ValueError):
    """The intertwining system has no invertible solution."""


class UnknownEntry(LinorbitsError, KeyError):
    """Catalog entry name is not registered."""


class MismatchedProfile(LinorbitsError, AssertionError):
    """A computed orbit profile differs from the catalog expectation."""

    def __init__(self, name, expected, got):
        super().__init__(
            f"{name}: expected orbit sizes {expected}, computed {got}"
        )
        self.name = name
        self.expected = expected
        self.got = got


class ParseError(LinorbitsError, ValueError):
    """A data file failed validation."""
