"""Error types raised by the toolkit.

Everything derives from ``GNSError``. Validation failures also derive from
``ValueError`` and map to exit code 1 in the CLI; numerical degeneracy derives
from ``ArithmeticError`` and maps to exit code 2.
"""


class GNSError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ValidationError(GNSError, ValueError):
    """Input does not satisfy an operation's preconditions."""


class InvalidSpecError(ValidationError):
    pass


class ShapeMismatchError(ValidationError):
    pass


class IndexOutOfRangeError(ValidationError, IndexError):
    pass


class UnsupportedError(ValidationError):
    pass


class InvalidStateError(ValidationError):
    pass


class InvalidEmbeddingError(ValidationError):
    pass


class InvalidFamilyError(ValidationError):
    pass


class InvalidDensityError(ValidationError):
    pass


class InvalidUnitaryError(ValidationError):
    pass


class FaithfulnessRequiredError(ValidationError):
    pass


class ScenarioError(ValidationError):
    """Scenario file could not be parsed or validated."""

    def __init__(self, message: str, field: str = None, line: int = None, column: int = None):
        self.field = field
        self.line = line
        self.column = column
        super().__init__(message)


class NumericalDegeneracyError(GNSError, ArithmeticError):
    """A computation became ill-conditioned beyond its tolerance."""

    exit_code = 2
