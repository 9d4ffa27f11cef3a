"""Deterministic rasters for the catalog's geometric archetypes.

Shapes are rendered from analytic membership tests on the pixel grid
(dark ink 0 on white 255), so every render is reproducible bit for bit.
Stroke width is 2 px at scale 1 and scales with the glyph, floored just
above the grid covering radius so thin outlines never break apart.

Rotation steps follow the rotation-digit convention: step 1 points up,
each following step turns 45 degrees counterclockwise on screen.
"""

from __future__ import annotations

import math

import numpy as np

from .catalog import Primitive, SymbolMeta
from .errors import UnsupportedTemplate
from .raster import GrayImage

MIN_SCALE = 0.25
MAX_SCALE = 4.0

# Fractions of nominal_size used by the composite shapes.
_FINGER_SQUARE_SIDE = 0.64
_ARROW_HEAD_LENGTH = 0.22
_ARROW_HEAD_HALF_BASE = 1.75  # in stroke widths


def _stroke_half(scale: float) -> float:
    # Band half-width 0.75 exceeds the grid covering radius sqrt(2)/2,
    # keeping 1-px-wide digitized curves gap-free.
    return max(2.0 * scale, 1.5) / 2.0


def _band(values, half):
    # Half-open so a nominal 2-px stroke rasterizes to exactly 2 px.
    return (values >= -half) & (values < half)


def render_template(meta: SymbolMeta, scale: float = 1.0,
                    rotation_step: int = 1) -> GrayImage:
    """Raster of the template primitive at the requested scale and
    orientation step."""
    if not MIN_SCALE <= scale <= MAX_SCALE:
        raise ValueError(f"scale {scale} outside [{MIN_SCALE}, {MAX_SCALE}]")
    steps = meta.template.orientation_steps
    if not 1 <= rotation_step <= steps:
        raise ValueError(f"rotation_step {rotation_step} outside 1..{steps}")

    size = meta.template.nominal_size * scale
    sh = _stroke_half(scale)
    reach = size / 2.0 + 4.0 * sh + 2.0
    half = int(math.ceil(reach))
    coords = np.arange(-half, half + 1, dtype=np.float64)
    x, y = np.meshgrid(coords, coords)

    primitive = meta.template.primitive
    if primitive is Primitive.CIRCLE_OUTLINE:
        mask = _band(np.hypot(x, y) - size / 2.0, sh)
    elif primitive is Primitive.CIRCLE_FILLED:
        mask = np.hypot(x, y) <= size / 2.0
    elif primitive is Primitive.SQUARE_OUTLINE:
        mask = _band(np.maximum(np.abs(x), np.abs(y)) - size / 2.0, sh)
    elif primitive is Primitive.SQUARE_FILLED:
        mask = np.maximum(np.abs(x), np.abs(y)) <= size / 2.0
    elif primitive is Primitive.SQUARE_WITH_FINGER:
        mask = _finger_square(x, y, size, sh)
    elif primitive is Primitive.STRAIGHT_ARROW:
        u, v = _derotate(x, y, rotation_step)
        mask = _arrow(u, v, size, sh)
    elif primitive is Primitive.CONTACT_STAR:
        mask = _star(x, y, size, sh)
    else:
        raise UnsupportedTemplate(str(primitive))

    return _to_image(mask)


def _derotate(x: np.ndarray, y: np.ndarray, rotation_step: int):
    """Map page coordinates back into the canonical (pointing up) frame
    for a shape rotated rotation_step quarters-of-90 counterclockwise."""
    delta = math.radians(45.0 * (rotation_step - 1))
    c, s = math.cos(delta), math.sin(delta)
    return c * x - s * y, s * x + c * y


def _finger_square(x, y, size, sh):
    side = _FINGER_SQUARE_SIDE * size
    square_cy = size / 2.0 - side / 2.0
    ring = _band(np.maximum(np.abs(x), np.abs(y - square_cy)) - side / 2.0, sh)
    finger = _band(x, sh) & (y >= -size / 2.0) & (y <= square_cy - side / 2.0 + sh)
    return ring | finger


def _arrow(x, y, length, sh):
    head_len = _ARROW_HEAD_LENGTH * length
    half_base = _ARROW_HEAD_HALF_BASE * 2.0 * sh
    tip = -length / 2.0
    shaft = _band(x, sh) & (y >= tip + head_len / 2.0) & (y <= length / 2.0)
    head = (y >= tip) & (y <= tip + head_len) & (np.abs(x) <= half_base * (y - tip) / head_len)
    return shaft | head


def _star(x, y, size, sh):
    mask = np.zeros(x.shape, dtype=bool)
    for axis_deg in (0.0, 60.0, 120.0):
        rad = math.radians(axis_deg)
        dx, dy = -math.sin(rad), -math.cos(rad)
        along = x * dx + y * dy
        across = x * dy - y * dx
        mask |= _band(across, sh) & (np.abs(along) <= size / 2.0)
    return mask


def _to_image(mask: np.ndarray, pad: int = 3) -> GrayImage:
    ys, xs = np.nonzero(mask)
    tight = mask[ys.min():ys.max() + 1, xs.min():xs.max() + 1]
    canvas = np.full((tight.shape[0] + 2 * pad, tight.shape[1] + 2 * pad),
                     255, dtype=np.uint8)
    canvas[pad:pad + tight.shape[0], pad:pad + tight.shape[1]][tight] = 0
    return GrayImage(canvas)
