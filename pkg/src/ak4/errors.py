"""Exception types shared across the package."""

from __future__ import annotations


class AK4Error(Exception):
    """Base class for all errors raised by this package."""


class ParseError(AK4Error):
    """Malformed expression text. Carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class DomainError(AK4Error):
    """Evaluation left the real domain of an elementary function."""


class JetOrderError(AK4Error):
    """An operation asked for more derivative orders than the jet carries."""


class ChartError(AK4Error):
    """Chart input is structurally invalid (missing keys, bad domain)."""


class StructureError(AK4Error):
    """A pointwise invariant of the almost Hermitian structure failed.

    Carries the name of the violated invariant and the measured residual.
    """

    def __init__(self, invariant: str, residual: float):
        super().__init__(f"structure invariant '{invariant}' violated, residual {residual:.3e}")
        self.invariant = invariant
        self.residual = residual
