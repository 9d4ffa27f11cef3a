"""Image file input/output: PGM (P5) and PNG.

Color inputs are converted to luminance (ITU-R 601-2 weights, what
Pillow's "L" mode uses). No other formats are supported.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image

from .raster import GrayImage

SUPPORTED_SUFFIXES = (".png", ".pgm")


def load_gray(path) -> GrayImage:
    """Load a PGM or PNG file as grayscale."""
    with Image.open(path) as img:
        return GrayImage(np.asarray(img.convert("L")))


def decode_gray(data: bytes) -> GrayImage:
    """Decode in-memory PGM or PNG bytes as grayscale."""
    with Image.open(io.BytesIO(data)) as img:
        return GrayImage(np.asarray(img.convert("L")))


def save_gray(path, image: GrayImage) -> None:
    """Write grayscale pixels; the suffix picks the container."""
    suffix = Path(path).suffix.lower()
    if suffix not in SUPPORTED_SUFFIXES:
        raise ValueError(f"unsupported image suffix {suffix!r}")
    Image.fromarray(image.pixels, mode="L").save(path)


def save_rgb_png(path, pixels: np.ndarray) -> None:
    """Write an (h, w, 3) uint8 array as PNG."""
    Image.fromarray(pixels, mode="RGB").save(path, format="PNG")
