"""Exception hierarchy shared by all swogr modules."""


class SwogrError(Exception):
    """Base class for every error raised by this package."""


class MalformedCode(SwogrError):
    """Symbol code text is not a 13-digit code in any accepted form."""


class OutOfRange(SwogrError):
    """A symbol code field lies outside its legal range."""


class CatalogParseError(SwogrError):
    """A catalog file record could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateCode(SwogrError):
    """The same symbol code appears twice in one catalog."""


class UnknownSymbol(SwogrError):
    """Symbol code not present in the catalog."""


class UnsupportedTemplate(SwogrError):
    """No renderer exists for the requested template primitive."""


class SwmlParseError(SwogrError):
    """SWML input is not well-formed XML."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class SchemaViolation(SwogrError):
    """SWML content violates the document schema (missing attribute,
    bad value, or a bounding box escaping its container)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{line}:{column if column is not None else 0}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class DegenerateComponent(SwogrError):
    """Component too small for shape features (area < 4)."""


class InvalidCascade(SwogrError):
    """Classifier cascade with duplicate rule priorities."""


class EmptyInk(SwogrError):
    """Stroke input contains no strokes."""


class DimensionMismatch(SwogrError):
    """Recognition outcome references coordinates outside the image."""


class ConfigError(SwogrError):
    """Bad key or value in a recognizer config file."""
