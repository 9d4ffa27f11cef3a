"""SWML documents: the serializable recognition result.

A document records the source page, the recognized glyphs grouped into
sign boxes, and the leftover unrecognized regions. The canonical file
form is a small XML dialect:

    <swml version="1.0">
      <source image="page.png" width="800" height="600"/>
      <signbox id="1" x="40" y="32" w="120" h="180">
        <glyph code="04-01-001-01-01-01" x="10" y="0" w="64" h="64" confidence="0.92"/>
      </signbox>
      <unrecognized x="500" y="410" w="22" h="19"/>
    </swml>

Serialization is canonical: LF line endings, 2-space indent, fixed
attribute order, confidence with exactly two decimals, integer geometry.
Parsing is liberal about attribute order and whitespace but rejects any
schema violation outright; out-of-bounds boxes are never clamped.
"""

from __future__ import annotations

import xml.parsers.expat
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .codes import IswaCode, format_code, parse_code
from .errors import SchemaViolation, SwmlParseError

BBox = tuple[int, int, int, int]


def _check_bbox(bbox, what: str) -> BBox:
    if len(bbox) != 4 or not all(isinstance(v, int) for v in bbox):
        raise SchemaViolation(f"{what} bbox must be four integers, got {bbox!r}")
    x, y, w, h = bbox
    if w <= 0 or h <= 0:
        raise SchemaViolation(f"{what} bbox has non-positive size: {bbox}")
    return (x, y, w, h)


@dataclass(frozen=True)
class Glyph:
    """One recognized symbol instance: code, box, confidence.

    Confidence is quantized to two decimals at construction so the model
    round-trips losslessly through the canonical file form.
    """

    code: IswaCode
    bbox: BBox
    confidence: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "bbox", _check_bbox(self.bbox, "glyph"))
        if not 0.0 <= self.confidence <= 1.0:
            raise SchemaViolation(f"confidence {self.confidence} outside [0, 1]")
        object.__setattr__(self, "confidence", round(float(self.confidence), 2))


@dataclass(frozen=True)
class SignBox:
    """A spatial cluster of glyphs composing one sign.

    Glyph boxes are relative to the sign box origin and must fit inside
    it; the glyph list is kept sorted by (y, then x) of each origin.
    """

    id: int
    bbox: BBox
    glyphs: tuple[Glyph, ...] = ()

    def __post_init__(self):
        if self.id < 1:
            raise SchemaViolation(f"signbox id must be positive, got {self.id}")
        object.__setattr__(self, "bbox", _check_bbox(self.bbox, "signbox"))
        ordered = tuple(sorted(self.glyphs, key=lambda g: (g.bbox[1], g.bbox[0])))
        _, _, w, h = self.bbox
        for g in ordered:
            gx, gy, gw, gh = g.bbox
            if gx < 0 or gy < 0 or gx + gw > w or gy + gh > h:
                raise SchemaViolation(
                    f"glyph {format_code(g.code)} at {g.bbox} escapes signbox "
                    f"{self.id} of size {w}x{h}")
        object.__setattr__(self, "glyphs", ordered)


@dataclass(frozen=True)
class Source:
    image: str
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise SchemaViolation(f"source size {self.width}x{self.height} invalid")


@dataclass(frozen=True)
class SwmlDocument:
    source: Source
    signboxes: tuple[SignBox, ...] = ()
    unrecognized: tuple[BBox, ...] = ()

    def __post_init__(self):
        boxes = tuple(sorted(self.signboxes, key=lambda b: b.id))
        ids = [b.id for b in boxes]
        if ids != list(range(1, len(ids) + 1)):
            raise SchemaViolation(f"signbox ids must be contiguous from 1, got {ids}")
        for b in boxes:
            self._check_in_page(b.bbox, f"signbox {b.id}")
        leftovers = tuple(sorted((_check_bbox(b, "unrecognized")
                                  for b in self.unrecognized),
                                 key=lambda b: (b[1], b[0], b[2], b[3])))
        for b in leftovers:
            self._check_in_page(b, "unrecognized box")
        object.__setattr__(self, "signboxes", boxes)
        object.__setattr__(self, "unrecognized", leftovers)

    def _check_in_page(self, bbox: BBox, what: str):
        x, y, w, h = bbox
        if x < 0 or y < 0 or x + w > self.source.width or y + h > self.source.height:
            raise SchemaViolation(
                f"{what} at {bbox} escapes page "
                f"{self.source.width}x{self.source.height}")

    def glyph_count(self) -> int:
        return sum(len(b.glyphs) for b in self.signboxes)

    def page_glyphs(self) -> list[tuple[IswaCode, BBox, float]]:
        """All glyphs with boxes converted back to the page frame."""
        out = []
        for box in self.signboxes:
            bx, by, _, _ = box.bbox
            for g in box.glyphs:
                gx, gy, gw, gh = g.bbox
                out.append((g.code, (bx + gx, by + gy, gw, gh), g.confidence))
        return out


# -- canonical serialization -------------------------------------------------

def _attr(value) -> str:
    return escape(str(value), {'"': "&quot;"})


def swml_serialize(doc: SwmlDocument) -> bytes:
    lines = ['<swml version="1.0">']
    s = doc.source
    lines.append(f'  <source image="{_attr(s.image)}" width="{s.width}" height="{s.height}"/>')
    for box in doc.signboxes:
        x, y, w, h = box.bbox
        lines.append(f'  <signbox id="{box.id}" x="{x}" y="{y}" w="{w}" h="{h}">')
        for g in box.glyphs:
            gx, gy, gw, gh = g.bbox
            lines.append(f'    <glyph code="{format_code(g.code)}" x="{gx}" y="{gy}" '
                         f'w="{gw}" h="{gh}" confidence="{g.confidence:.2f}"/>')
        lines.append('  </signbox>')
    for x, y, w, h in doc.unrecognized:
        lines.append(f'  <unrecognized x="{x}" y="{y}" w="{w}" h="{h}"/>')
    lines.append('</swml>')
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- liberal parsing ---------------------------------------------------------

class _Parser:
    def __init__(self):
        self.parser = xml.parsers.expat.ParserCreate()
        self.parser.StartElementHandler = self.start
        self.parser.EndElementHandler = self.end
        self.parser.CharacterDataHandler = self.text
        self.stack: list[str] = []
        self.source: Source | None = None
        self.boxes: list[SignBox] = []
        self.unrecognized: list[BBox] = []
        self.box_attrs: dict | None = None
        self.box_glyphs: list[Glyph] = []

    def pos(self) -> tuple[int, int]:
        return self.parser.CurrentLineNumber, self.parser.CurrentColumnNumber + 1

    def fail(self, message: str):
        line, col = self.pos()
        raise SchemaViolation(message, line, col)

    def need(self, attrs: dict, names: tuple[str, ...], element: str) -> list[str]:
        out = []
        for name in names:
            if name not in attrs:
                self.fail(f"<{element}> missing required attribute {name!r}")
            out.append(attrs[name])
        return out

    def ints(self, values: list[str], element: str) -> list[int]:
        out = []
        for v in values:
            try:
                out.append(int(v))
            except ValueError:
                self.fail(f"<{element}> geometry must be integer, got {v!r}")
        return out

    def start(self, name: str, attrs: dict):
        parent = self.stack[-1] if self.stack else None
        self.stack.append(name)
        if parent is None:
            if name != "swml":
                self.fail(f"root element must be <swml>, got <{name}>")
            return
        if parent == "swml":
            if name == "source":
                if self.source is not None:
                    self.fail("duplicate <source> element")
                image = self.need(attrs, ("image",), name)[0]
                w, h = self.ints(self.need(attrs, ("width", "height"), name), name)
                self.source = self.build(lambda: Source(image, w, h))
            elif name == "signbox":
                vals = self.ints(self.need(attrs, ("id", "x", "y", "w", "h"), name), name)
                self.box_attrs = {"id": vals[0], "bbox": tuple(vals[1:])}
                self.box_glyphs = []
            elif name == "unrecognized":
                vals = self.ints(self.need(attrs, ("x", "y", "w", "h"), name), name)
                self.unrecognized.append(tuple(vals))
            else:
                self.fail(f"unexpected element <{name}> in <swml>")
        elif parent == "signbox":
            if name != "glyph":
                self.fail(f"unexpected element <{name}> in <signbox>")
            code_text = self.need(attrs, ("code",), name)[0]
            vals = self.ints(self.need(attrs, ("x", "y", "w", "h"), name), name)
            conf_text = self.need(attrs, ("confidence",), name)[0]
            try:
                code = parse_code(code_text)
            except Exception as exc:
                self.fail(f"bad glyph code {code_text!r}: {exc}")
            try:
                confidence = float(conf_text)
            except ValueError:
                self.fail(f"bad confidence {conf_text!r}")
            self.box_glyphs.append(
                self.build(lambda: Glyph(code, tuple(vals), confidence)))
        else:
            self.fail(f"unexpected element <{name}> in <{parent}>")

    def end(self, name: str):
        self.stack.pop()
        if name == "signbox":
            attrs = self.box_attrs
            self.box_attrs = None
            self.boxes.append(self.build(
                lambda: SignBox(attrs["id"], attrs["bbox"], tuple(self.box_glyphs))))

    def text(self, data: str):
        if data.strip():
            self.fail(f"unexpected text content {data.strip()!r}")

    def build(self, factory):
        try:
            return factory()
        except SchemaViolation as exc:
            if exc.line is None:
                line, col = self.pos()
                raise SchemaViolation(str(exc), line, col) from None
            raise

    def run(self, data: bytes) -> SwmlDocument:
        try:
            self.parser.Parse(data, True)
        except xml.parsers.expat.ExpatError as exc:
            raise SwmlParseError(xml.parsers.expat.ErrorString(exc.code),
                                 exc.lineno, exc.offset + 1) from None
        if self.source is None:
            raise SchemaViolation("document has no <source> element")
        return SwmlDocument(self.source, tuple(self.boxes), tuple(self.unrecognized))


def swml_parse(data: bytes) -> SwmlDocument:
    """Parse SWML bytes. Raises SwmlParseError for malformed XML and
    SchemaViolation for well-formed XML that breaks the document rules."""
    return _Parser().run(data)


# -- JSON mirror (the service wire form, field-for-field) --------------------

def document_to_json(doc: SwmlDocument) -> dict:
    return {
        "version": "1.0",
        "source": {"image": doc.source.image, "width": doc.source.width,
                   "height": doc.source.height},
        "signboxes": [
            {
                "id": box.id,
                "x": box.bbox[0], "y": box.bbox[1],
                "w": box.bbox[2], "h": box.bbox[3],
                "glyphs": [
                    {
                        "code": format_code(g.code),
                        "x": g.bbox[0], "y": g.bbox[1],
                        "w": g.bbox[2], "h": g.bbox[3],
                        "confidence": g.confidence,
                    }
                    for g in box.glyphs
                ],
            }
            for box in doc.signboxes
        ],
        "unrecognized": [
            {"x": b[0], "y": b[1], "w": b[2], "h": b[3]}
            for b in doc.unrecognized
        ],
    }


def _json_bbox(obj: dict, what: str) -> BBox:
    try:
        return tuple(int(obj[k]) for k in ("x", "y", "w", "h"))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"{what}: bad or missing geometry: {exc}") from None


def document_from_json(data) -> SwmlDocument:
    """Build a document from the JSON mirror, enforcing the same schema
    rules as the XML parser."""
    if not isinstance(data, dict):
        raise SchemaViolation("document body must be a JSON object")
    src = data.get("source")
    if not isinstance(src, dict):
        raise SchemaViolation("missing source object")
    try:
        source = Source(str(src["image"]), int(src["width"]), int(src["height"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"bad source: {exc}") from None
    boxes = []
    for raw in data.get("signboxes", []):
        if not isinstance(raw, dict):
            raise SchemaViolation("signbox entries must be objects")
        glyphs = []
        for graw in raw.get("glyphs", []):
            try:
                code = parse_code(str(graw["code"]))
                confidence = float(graw.get("confidence", 1.0))
            except SchemaViolation:
                raise
            except Exception as exc:
                raise SchemaViolation(f"bad glyph: {exc}") from None
            glyphs.append(Glyph(code, _json_bbox(graw, "glyph"), confidence))
        try:
            box_id = int(raw["id"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation(f"bad signbox id: {exc}") from None
        boxes.append(SignBox(box_id, _json_bbox(raw, "signbox"), tuple(glyphs)))
    leftovers = tuple(_json_bbox(b, "unrecognized")
                      for b in data.get("unrecognized", []))
    return SwmlDocument(source, tuple(boxes), leftovers)
