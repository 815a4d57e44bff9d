"""Exception types shared across the package."""


class SproutsError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SproutsError):
    """The input text is not a well-formed position string."""

    def __init__(self, message: str, index: int | None = None):
        if index is not None:
            message = f"{message} (at index {index})"
        super().__init__(message)
        self.index = index


class RenderError(SproutsError):
    """The position cannot be written with the 26-letter alphabet."""


class StoreConflictError(SproutsError):
    """Two different nimbers were recorded for the same land."""


class StoreFormatError(SproutsError):
    """A store text file contains an invalid line."""


class BudgetExceededError(SproutsError):
    """The search exceeded its node budget."""


class SearchAbortedError(SproutsError):
    """An interactive session cancelled the search."""


class NimberRangeError(SproutsError):
    """No nimber was found within the lives bound (search defect)."""


class CheckError(SproutsError):
    """A check computation could not complete against its reference store."""
