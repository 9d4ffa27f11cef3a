"""Result embedding: pair a recognition outcome with an annotated page
image and the SWML data file.

The overlay draws each glyph box with its 13-digit code as a label,
unrecognized boxes, and sign boxes, each family in its own fixed color:

    glyph boxes        green  (0, 160, 0)
    unrecognized boxes red    (200, 0, 0)
    sign boxes         blue   (0, 0, 200)
    code labels        gray   (64, 64, 64)

Rendering is deterministic; outside the drawn rectangles and labels the
source pixels pass through untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageDraw, ImageFont

from .codes import format_code
from .engine import RecognitionOutcome
from .errors import DimensionMismatch
from .raster import GrayImage
from .swml import SwmlDocument

GLYPH_COLOR = (0, 160, 0)
UNRECOGNIZED_COLOR = (200, 0, 0)
SIGNBOX_COLOR = (0, 0, 200)
LABEL_COLOR = (64, 64, 64)


@dataclass(frozen=True)
class AnnotatedResult:
    image: np.ndarray  # (h, w, 3) uint8 overlay render
    swml: SwmlDocument


def embed(image: GrayImage, outcome: RecognitionOutcome,
          image_name: str = "page") -> AnnotatedResult:
    """Draw the outcome onto an RGB copy of the page and bundle it with
    the SWML document. Raises DimensionMismatch if the outcome references
    coordinates outside the image."""
    if outcome.page_size != (image.width, image.height):
        raise DimensionMismatch(
            f"outcome for {outcome.page_size} applied to "
            f"{image.width}x{image.height} image")
    for x, y, w, h in [g.bbox for g in outcome.glyphs] + list(outcome.unrecognized):
        if x < 0 or y < 0 or x + w > image.width or y + h > image.height:
            raise DimensionMismatch(f"box {(x, y, w, h)} escapes the image")

    canvas = Image.fromarray(image.pixels, mode="L").convert("RGB")
    draw = ImageDraw.Draw(canvas)
    font = ImageFont.load_default()

    def rect(bbox, color):
        x, y, w, h = bbox
        draw.rectangle((x, y, x + w - 1, y + h - 1), outline=color, width=1)

    for box in outcome.signboxes:
        # outset by 2 px so the container stays visible around its glyphs
        x, y, w, h = box.bbox
        rect((max(0, x - 2), max(0, y - 2),
              min(image.width, x + w + 2) - max(0, x - 2),
              min(image.height, y + h + 2) - max(0, y - 2)), SIGNBOX_COLOR)
    for bbox in outcome.unrecognized:
        rect(bbox, UNRECOGNIZED_COLOR)
    # labels first so box strokes are never sliced by neighboring text
    for glyph in outcome.glyphs:
        x, y, _, _ = glyph.bbox
        draw.text((x, max(0, y - 13)), format_code(glyph.code),
                  fill=LABEL_COLOR, font=font)
    for glyph in outcome.glyphs:
        rect(glyph.bbox, GLYPH_COLOR)

    return AnnotatedResult(np.asarray(canvas, dtype=np.uint8),
                           outcome.to_document(image_name))
