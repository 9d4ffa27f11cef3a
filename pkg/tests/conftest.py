import sys
from dataclasses import replace
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import numpy as np
import pytest

from swogr.catalog import default_catalog
from swogr.engine import RecognizerConfig
from swogr.raster import GrayImage
from swogr.templates import render_template


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture()
def cfg():
    return RecognizerConfig()


def archetype_combos(catalog):
    """Every (meta, scale, rotation, expected code) the recognizer must
    recover from clean renders."""
    combos = []
    for meta in catalog:
        for scale in (0.5, 1.0, 2.0):
            for rot in range(1, meta.template.orientation_steps + 1):
                expected = (replace(meta.code, rotation=rot)
                            if meta.template.orientation_steps > 1 else meta.code)
                combos.append((meta, scale, rot, expected))
    return combos


def compose_page(items, cols=4, cell=150):
    """Lay renders out on one white page, one per grid cell.

    items: (meta, scale, rotation, expected_code) tuples.
    Returns (GrayImage, [(cell bbox, expected_code), ...]).
    """
    rows = (len(items) + cols - 1) // cols
    page = np.full((rows * cell, cols * cell), 255, dtype=np.uint8)
    placements = []
    for i, (meta, scale, rot, expected) in enumerate(items):
        r, c = divmod(i, cols)
        tile = render_template(meta, scale, rot).pixels
        th, tw = tile.shape
        if th > cell or tw > cell:
            raise ValueError(f"{meta.name} at scale {scale} exceeds cell {cell}")
        y = r * cell + (cell - th) // 2
        x = c * cell + (cell - tw) // 2
        region = page[y:y + th, x:x + tw]
        np.minimum(region, tile, out=region)
        placements.append(((c * cell, r * cell, cell, cell), expected))
    return GrayImage(page), placements


def match_placements(outcome, placements):
    """Count planted glyphs recovered with the right code: exactly one
    recognized glyph centered in the cell, carrying the expected code."""
    correct = 0
    for (cx, cy, cw, ch), expected in placements:
        hits = [g for g in outcome.glyphs
                if cx <= g.bbox[0] + g.bbox[2] // 2 < cx + cw
                and cy <= g.bbox[1] + g.bbox[3] // 2 < cy + ch]
        if len(hits) == 1 and hits[0].code == expected:
            correct += 1
    return correct


def circle_stroke(cx, cy, radius, points=48):
    angles = np.linspace(0.0, 2.0 * np.pi, points)
    return tuple((int(round(cx + radius * np.cos(a))),
                  int(round(cy + radius * np.sin(a)))) for a in angles)
