"""Symbol catalog: the taxonomy of recognizable symbols.

Catalog files are UTF-8 text, one record per line:

    code|name|category_name|primitive|nominal_size|orientation_steps

Lines starting with ``#`` and blank lines are ignored. The default
catalog ships the seven geometric archetypes the recognizer covers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources

from .codes import CATEGORY_COUNT, IswaCode, format_code, parse_code
from .errors import CatalogParseError, DuplicateCode, UnknownSymbol


class Primitive(enum.Enum):
    CIRCLE_OUTLINE = "circle_outline"
    CIRCLE_FILLED = "circle_filled"
    SQUARE_OUTLINE = "square_outline"
    SQUARE_FILLED = "square_filled"
    SQUARE_WITH_FINGER = "square_with_finger"
    STRAIGHT_ARROW = "straight_arrow"
    CONTACT_STAR = "contact_star"


@dataclass(frozen=True)
class GlyphTemplate:
    primitive: Primitive
    nominal_size: int
    orientation_steps: int

    def __post_init__(self):
        if self.nominal_size <= 0:
            raise ValueError(f"nominal_size must be positive, got {self.nominal_size}")
        if self.orientation_steps not in (1, 8):
            raise ValueError(f"orientation_steps must be 1 or 8, got {self.orientation_steps}")


@dataclass(frozen=True)
class SymbolMeta:
    code: IswaCode
    name: str
    category_name: str
    template: GlyphTemplate


class SymbolCatalog:
    """Read-only map from symbol codes to their metadata."""

    def __init__(self, entries: list[SymbolMeta]):
        self._by_code: dict[IswaCode, SymbolMeta] = {}
        category_names: dict[int, str] = {}
        for meta in entries:
            if meta.code in self._by_code:
                raise DuplicateCode(format_code(meta.code))
            seen = category_names.setdefault(meta.code.category, meta.category_name)
            if seen != meta.category_name:
                raise CatalogParseError(
                    f"category {meta.code.category} named both "
                    f"{seen!r} and {meta.category_name!r}")
            self._by_code[meta.code] = meta

    def __len__(self) -> int:
        return len(self._by_code)

    def __iter__(self):
        return iter(sorted(self._by_code.values(), key=lambda m: m.code))

    def lookup(self, code: IswaCode) -> SymbolMeta:
        """Resolve a code to its catalog entry.

        Codes whose rotation digit selects one orientation of a
        multi-orientation entry resolve to that entry, provided the
        digit does not exceed the entry's orientation_steps.
        """
        meta = self._by_code.get(code)
        if meta is not None:
            return meta
        if code.rotation != 1:
            base = self._by_code.get(replace(code, rotation=1))
            if base is not None and code.rotation <= base.template.orientation_steps:
                return base
        raise UnknownSymbol(format_code(code))

    def __contains__(self, code: IswaCode) -> bool:
        try:
            self.lookup(code)
            return True
        except UnknownSymbol:
            return False

    def search(self, category: int | None = None, q: str | None = None) -> list[SymbolMeta]:
        """Entries filtered by category and/or case-insensitive name substring,
        ordered by code."""
        if category is not None and not 1 <= category <= CATEGORY_COUNT:
            raise ValueError(f"category {category} outside 1..{CATEGORY_COUNT}")
        needle = q.lower() if q else None
        out = []
        for meta in self:
            if category is not None and meta.code.category != category:
                continue
            if needle is not None and needle not in meta.name.lower():
                continue
            out.append(meta)
        return out


def catalog_load(data: bytes) -> SymbolCatalog:
    """Parse a catalog file. Raises CatalogParseError with the offending
    line number, or DuplicateCode."""
    entries = []
    for lineno, raw in enumerate(data.decode("utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("|")]
        if len(fields) != 6:
            raise CatalogParseError(f"expected 6 fields, got {len(fields)}", lineno)
        code_text, name, category_name, primitive_name, size_text, steps_text = fields
        try:
            code = parse_code(code_text)
        except Exception as exc:
            raise CatalogParseError(f"bad code {code_text!r}: {exc}", lineno) from exc
        try:
            primitive = Primitive(primitive_name)
        except ValueError as exc:
            raise CatalogParseError(f"unknown primitive {primitive_name!r}", lineno) from exc
        try:
            template = GlyphTemplate(primitive, int(size_text), int(steps_text))
        except ValueError as exc:
            raise CatalogParseError(str(exc), lineno) from exc
        if not name:
            raise CatalogParseError("empty symbol name", lineno)
        entries.append(SymbolMeta(code, name, category_name, template))
    try:
        return SymbolCatalog(entries)
    except CatalogParseError:
        raise
    except DuplicateCode:
        raise


@lru_cache(maxsize=1)
def default_catalog() -> SymbolCatalog:
    """The packaged archetype catalog."""
    data = resources.files("swogr").joinpath("data/default_catalog.txt").read_bytes()
    return catalog_load(data)
