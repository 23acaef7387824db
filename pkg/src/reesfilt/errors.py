"""Exception types shared across the package."""
from __future__ import annotations


class ReesfiltError(Exception):
    pass


class RingMismatchError(ReesfiltError, ValueError):
    pass


class InvariantError(ReesfiltError, ValueError):
    """A structural invariant failed (d∘d ≠ 0, non-commuting square, ...).

    ``where`` names the failing position, e.g. ``"degree pair (2, 1)"``.
    """

    def __init__(self, message: str, where: str | None = None):
        super().__init__(message if where is None else f"{message} at {where}")
        self.where = where


class SchemaError(ReesfiltError, ValueError):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
