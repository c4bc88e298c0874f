#!/usr/bin/env python3
"""Exceptions raised by the justify toolkit.

Validation never raises; it returns defect lists. These are for callers that
ask for something the inputs cannot support.
"""

from __future__ import annotations

from typing import Any, List, Optional, Sequence


class JustifyError(Exception):
    """Base class for every error raised by this package."""


class InputError(JustifyError):
    """Malformed or contradictory input. The CLI maps this to exit code 2."""

    def __init__(self, message: str, defects: Optional[Sequence[str]] = None) -> None:
        super().__init__(message)
        self.defects: List[str] = list(defects or [])

    def __str__(self) -> str:
        base = super().__str__()
        if not self.defects:
            return base
        return base + ": " + "; ".join(self.defects)


class UnsupportedSizeError(InputError):
    """An enumeration or dual-cone size cap was exceeded."""


class FitError(JustifyError):
    """A fitting precondition does not hold for the data."""

    def __init__(self, message: str, violations: Optional[Sequence[Any]] = None) -> None:
        super().__init__(message)
        self.violations: List[Any] = list(violations or [])


class NumericError(JustifyError):
    """A linear program or factorization failed."""

    def __init__(self, message: str, *, status: Optional[int] = None, shape: Optional[tuple] = None) -> None:
        detail = message
        if status is not None:
            detail += f" (solver status {status}"
            detail += f", problem shape {shape})" if shape is not None else ")"
        super().__init__(detail)
        self.status = status
        self.shape = shape


class IdentificationError(JustifyError):
    """The data do not pin down the object being recovered."""
