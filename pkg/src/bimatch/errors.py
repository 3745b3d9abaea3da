from __future__ import annotations


class BimatchError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(BimatchError, ValueError):
    """Operands have incompatible shapes, ambient dimensions or moduli."""


class ValidationError(BimatchError, ValueError):
    """An input object violates one of its structural invariants.

    ``where`` names the offending location (a square index, a field name,
    a simplex) so callers can print a precise diagnostic.
    """

    def __init__(self, message: str, where: object = None):
        super().__init__(message)
        self.where = where


class ParseError(BimatchError):
    """An input file is missing, is not valid JSON, or lacks a required field."""

    def __init__(self, message: str, where: object = None):
        super().__init__(message)
        self.where = where
