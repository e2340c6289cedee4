"""Exception types shared across the package."""


class HomtreeError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(HomtreeError):
    """A run configuration is invalid or unsafe (e.g. could not terminate)."""


class GraphFormatError(HomtreeError):
    """A graph text file could not be loaded.

    ``line`` is the 1-based line number of the offending line when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateNodeError(GraphFormatError):
    """A node id was declared twice."""


class UnknownNodeError(GraphFormatError):
    """An edge or transaction line refers to an undeclared node."""


class OracleCapError(HomtreeError):
    """A brute-force oracle was asked to handle an instance above its cap."""


class MiningInvariantError(HomtreeError):
    """An internal invariant of the search was violated (a bug, not bad input)."""
