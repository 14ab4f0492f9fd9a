"""Exception hierarchy shared by every firescope_kit module.

Validation problems derive from ``ValueError`` so plain ``except ValueError``
callers keep working; file-system problems are left to the built-in
``OSError`` family.
"""
from __future__ import annotations

from typing import Optional


class FireScopeError(Exception):
    """Root of all firescope_kit errors."""


class ValidationError(FireScopeError, ValueError):
    """Input violates a documented precondition.

    ``field`` names the offending field or argument when one can be blamed.
    """

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class DimensionMismatchError(ValidationError):
    """Two rasters (or sequences) that must align do not."""


class EmptyInputError(ValidationError):
    """Nothing left to evaluate after masking / filtering."""


class DegeneratePopulationError(ValidationError):
    """A reference population cannot define a rank transform."""


class MissingClimateError(ValidationError):
    """A monthly climate record or one of its variables is absent."""

    def __init__(
        self,
        message: str,
        month: Optional[int] = None,
        variable: Optional[str] = None,
    ) -> None:
        self.month = month
        self.variable = variable
        if month is None:
            field = "climate"
        else:
            field = f"month {month}" if variable is None else f"month {month}.{variable}"
        super().__init__(message, field=field)


class ContainerError(ValidationError):
    """A raster container header or payload is malformed."""

    def __init__(self, message: str, field: Optional[str] = None, path: Optional[str] = None) -> None:
        self.path = path
        super().__init__(f"{message} ({path})" if path else message, field=field)


class ManifestError(ValidationError):
    """An evaluation manifest entry is inconsistent with its role."""


__all__ = [
    "FireScopeError",
    "ValidationError",
    "DimensionMismatchError",
    "EmptyInputError",
    "DegeneratePopulationError",
    "MissingClimateError",
    "ContainerError",
    "ManifestError",
]
