class DefektumError(Exception):
    """Base class for errors raised by this package."""


class ParseError(DefektumError, ValueError):
    """Malformed input document. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ClassificationError(DefektumError, ValueError):
    """A degeneracy pattern that the requested point group cannot produce."""


class SchemaError(DefektumError, ValueError):
    """Dossier failed validation; ``errors`` holds every problem found."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
