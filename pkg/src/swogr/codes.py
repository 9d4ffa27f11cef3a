"""13-digit ISWA symbol codes.

A code addresses one symbol as six dash-separated, zero-padded decimal
fields: category (2 digits), group (2), base (3), variation (2), fill (2),
rotation (2), e.g. ``04-01-001-01-01-01``. The bare 13-digit form without
dashes is accepted on input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MalformedCode, OutOfRange

FIELD_WIDTHS = (2, 2, 3, 2, 2, 2)
FIELD_NAMES = ("category", "group", "base", "variation", "fill", "rotation")
# Inclusive upper bounds per field; every field is at least 1.
FIELD_MAX = (7, 99, 999, 99, 99, 99)

CATEGORY_COUNT = 7


@dataclass(frozen=True, order=True)
class IswaCode:
    category: int
    group: int
    base: int
    variation: int
    fill: int
    rotation: int

    def __post_init__(self):
        for name, value, upper in zip(FIELD_NAMES, self._fields(), FIELD_MAX):
            if not isinstance(value, int):
                raise OutOfRange(f"{name} must be an integer, got {value!r}")
            if value < 1 or value > upper:
                raise OutOfRange(f"{name} {value} outside range 1..{upper}")

    def _fields(self) -> tuple[int, int, int, int, int, int]:
        return (self.category, self.group, self.base,
                self.variation, self.fill, self.rotation)

    def __str__(self) -> str:
        return format_code(self)


def format_code(code: IswaCode) -> str:
    """Canonical dashed text form, field widths 2-2-3-2-2-2."""
    return "-".join(f"{value:0{width}d}"
                    for value, width in zip(code._fields(), FIELD_WIDTHS))


def parse_code(text: str) -> IswaCode:
    """Parse the canonical dashed form or the bare 13-digit form.

    Raises MalformedCode for structural problems and OutOfRange for
    digit groups outside their legal ranges.
    """
    if not isinstance(text, str):
        raise MalformedCode(f"expected a string, got {type(text).__name__}")
    if "-" in text:
        parts = text.split("-")
        if len(parts) != 6:
            raise MalformedCode(f"expected 6 dash-separated fields, got {len(parts)}: {text!r}")
        for part, width in zip(parts, FIELD_WIDTHS):
            if len(part) != width or not part.isdigit():
                raise MalformedCode(f"bad field {part!r} in {text!r}")
    else:
        if len(text) != 13 or not text.isdigit():
            raise MalformedCode(f"expected 13 digits, got {text!r}")
        parts = []
        pos = 0
        for width in FIELD_WIDTHS:
            parts.append(text[pos:pos + width])
            pos += width
    return IswaCode(*(int(p) for p in parts))
