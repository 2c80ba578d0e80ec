# errors.py
# Exception types raised by the verification engine

from typing import Any, List, Optional, Tuple


class EquilevelError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(EquilevelError, ValueError):
    """Matrix or vector dimensions do not fit together."""


class ClosureError(EquilevelError, ValueError):
    """A kept set of cells is not closed under the boundary."""

    def __init__(self, witnesses: List[Tuple[str, str]]):
        """Initialize the closure error.

        Args:
            witnesses: (kept cell, dropped boundary cell) pairs
        """
        self.witnesses = list(witnesses)
        shown = ", ".join(f"{cell} -> {missing}" for cell, missing in self.witnesses[:5])
        more = f" (+{len(self.witnesses) - 5} more)" if len(self.witnesses) > 5 else ""
        super().__init__(f"subcomplex not closed: {shown}{more}")


class CellNameError(EquilevelError, KeyError):
    """A chain names a cell that is missing or sits in another degree."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown cell"


class InvalidComplexError(EquilevelError, ValueError):
    """A homology query was made on a complex that fails validation."""

    def __init__(self, result: Any):
        self.result = result
        super().__init__(f"complex fails validation with {len(result.violations)} violation(s)")


class DatasetLookupError(EquilevelError, LookupError):
    """No builtin dataset is registered under the requested name."""


class ChcParseError(EquilevelError, ValueError):
    """A .chc or .chains document could not be parsed."""

    def __init__(self, reason: str, line: int, column: int = 1, source: Optional[str] = None):
        """Initialize the parse error.

        Args:
            reason: What went wrong
            line: 1-based line number
            column: 1-based column of the offending token
            source: File name or other label for the document
        """
        self.reason = reason
        self.line = line
        self.column = column
        self.source = source or "<text>"
        super().__init__(f"{self.source}:{line}:{column}: {reason}")


class AlignmentError(EquilevelError, ValueError):
    """Two complexes do not share the same cell inventory."""


class FiltrationError(EquilevelError, ValueError):
    """A filtration key increases along some boundary entry."""

    def __init__(self, cell: str, boundary_cell: str, message: str):
        self.cell = cell
        self.boundary_cell = boundary_cell
        super().__init__(message)


class ClassificationError(EquilevelError, KeyError):
    """A cell's class is missing from the multiplicity table or contradicts it."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unclassified cell"


class ArityError(EquilevelError, ValueError):
    """An operation received a matching with the wrong number of chords."""


class ConfigError(EquilevelError, RuntimeError):
    """Configuration is missing or does not match its schema."""
