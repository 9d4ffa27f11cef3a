"""Raster primitives the recognizer is built on.

Binarization, connected components, Moore boundary tracing, hole
topology, and the geometric feature vector. Conventions used throughout:

- Image frame: origin top-left, x right, y down. Bounding boxes are
  (x, y, w, h) in pixels.
- Foreground uses 8-connectivity by default; hole regions always use the
  dual connectivity of the foreground, which keeps the topology sane.
- Perimeter is the step length around the traced outer boundary, axial
  steps count 1 and diagonal steps sqrt(2).
- Circularity is 4*pi*A/P**2 measured on the outer boundary alone:
  A is the polygon area of the traced contour and P its step length,
  so outlines score like their filled silhouettes. Discrete disks land
  a little below 1.0 and discrete squares right at pi/4.
- orientation_deg is the principal axis angle measured from the upward
  vertical, counterclockwise on screen, in [0, 180).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import ndimage

from .errors import DegenerateComponent

# Components below this area are speckle: features other than area/bbox
# are undefined for them.
DEGENERATE_AREA = 4

# Enclosed background pockets smaller than this do not count as holes;
# single-pixel dropouts from scanner noise must not flip topology.
HOLE_MIN_AREA = 4

_SQRT2 = math.sqrt(2.0)

# Moore neighborhood in clockwise screen order starting at west.
_MOORE = ((-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1))
_MOORE_INDEX = {d: i for i, d in enumerate(_MOORE)}


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Grayscale raster, row-major uint8 intensities, 0 = black ink."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("GrayImage needs a non-empty 2-D pixel array")
        arr = np.ascontiguousarray(arr, dtype=np.uint8)
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @staticmethod
    def blank(width: int, height: int, value: int = 255) -> "GrayImage":
        return GrayImage(np.full((height, width), value, dtype=np.uint8))


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Bit raster, True = foreground ink."""

    bits: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.bits), dtype=bool)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("BinaryImage needs a non-empty 2-D bit array")
        arr.flags.writeable = False
        object.__setattr__(self, "bits", arr)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]


def binarize_otsu(image: GrayImage) -> tuple[BinaryImage, int]:
    """Threshold by maximizing between-class variance over the 256-bin
    histogram. A pixel is foreground iff its intensity < threshold.

    Single-level images yield an empty foreground with threshold 0, so a
    blank scan never becomes one page-sized component. The argmax is
    computed with exact integer arithmetic; ties go to the smallest
    threshold.
    """
    hist = np.bincount(image.pixels.ravel(), minlength=256)
    if np.count_nonzero(hist) <= 1:
        return BinaryImage(np.zeros(image.pixels.shape, dtype=bool)), 0

    counts = [int(c) for c in hist]
    total = sum(counts)
    total_sum = sum(i * c for i, c in enumerate(counts))

    best_t = 0
    best_num = -1  # sigma_b**2 as the exact fraction num/den
    best_den = 1
    n0 = 0
    s0 = 0
    for t in range(1, 256):
        n0 += counts[t - 1]
        s0 += (t - 1) * counts[t - 1]
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            continue
        num = (s0 * n1 - (total_sum - s0) * n0) ** 2
        den = n0 * n1
        if num * best_den > best_num * den:
            best_num, best_den, best_t = num, den, t

    bits = image.pixels < best_t
    return BinaryImage(bits), best_t


class Component:
    """One maximal connected set of foreground pixels.

    Cheap fields (label, area, bbox) are computed eagerly; boundary,
    perimeter, centroid and hole topology are derived on first access and
    cached. Logically immutable.
    """

    def __init__(self, label: int, area: int, bbox: tuple[int, int, int, int],
                 mask: np.ndarray, connectivity: int,
                 hole_min_area: int = HOLE_MIN_AREA):
        self.label = label
        self.area = area
        self.pixel_count = area
        self.bbox = bbox
        self._mask = mask  # local boolean window, shape (bbox h, bbox w)
        self._connectivity = connectivity
        self._hole_min_area = hole_min_area

    def __repr__(self):
        return (f"Component(label={self.label}, area={self.area}, "
                f"bbox={self.bbox}, holes={self.hole_count})")

    @cached_property
    def _coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Global (xs, ys) pixel coordinates."""
        ys, xs = np.nonzero(self._mask)
        return xs + self.bbox[0], ys + self.bbox[1]

    @cached_property
    def centroid(self) -> tuple[float, float]:
        xs, ys = self._coords
        return float(xs.mean()), float(ys.mean())

    @cached_property
    def boundary(self) -> list[tuple[int, int]]:
        """Outer boundary, Moore trace, clockwise, starting at the
        top-left-most pixel. A closed cycle; thin sections may repeat."""
        return trace_boundary(self)

    @cached_property
    def perimeter(self) -> float:
        return _cycle_length(self.boundary)

    @cached_property
    def _hole_regions(self) -> tuple[int, int]:
        """(hole pixel total, hole count at the min-area filter)."""
        padded = np.pad(self._mask, 1)
        background = ~padded
        if self._connectivity == 8:
            structure = None  # 4-connected background, the dual of fg-8
        else:
            structure = np.ones((3, 3), dtype=bool)
        labels, count = ndimage.label(background, structure=structure)
        if count == 0:
            return 0, 0
        border = np.concatenate([labels[0, :], labels[-1, :],
                                 labels[:, 0], labels[:, -1]])
        outside = set(np.unique(border[border > 0]).tolist())
        sizes = np.bincount(labels.ravel(), minlength=count + 1)
        total = 0
        holes = 0
        for lab in range(1, count + 1):
            if lab in outside:
                continue
            total += int(sizes[lab])
            if sizes[lab] >= self._hole_min_area:
                holes += 1
        return total, holes

    @property
    def hole_count(self) -> int:
        return self._hole_regions[1]

    @property
    def enclosed_area(self) -> int:
        """Pixels inside the outer boundary: ink plus every hole pixel."""
        return self.area + self._hole_regions[0]


def connected_components(image: BinaryImage, connectivity: int = 8,
                         hole_min_area: int = HOLE_MIN_AREA) -> list[Component]:
    """Partition foreground pixels into maximal connected sets.

    Labels are assigned in raster-scan order of each component's first
    pixel, starting at 1.
    """
    if connectivity not in (4, 8):
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    structure = np.ones((3, 3), dtype=bool) if connectivity == 8 else None
    labels, count = ndimage.label(image.bits, structure=structure)
    if count == 0:
        return []

    flat = labels.ravel()
    first_index = np.full(count + 1, flat.size, dtype=np.int64)
    nonzero = np.flatnonzero(flat)
    np.minimum.at(first_index, flat[nonzero], nonzero)
    order = np.argsort(first_index[1:], kind="stable")

    slices = ndimage.find_objects(labels)
    areas = np.bincount(flat, minlength=count + 1)

    components = []
    for new_label, original_index in enumerate(order, start=1):
        original = int(original_index) + 1
        row_slice, col_slice = slices[original_index]
        mask = labels[row_slice, col_slice] == original
        bbox = (col_slice.start, row_slice.start,
                col_slice.stop - col_slice.start,
                row_slice.stop - row_slice.start)
        components.append(Component(new_label, int(areas[original]), bbox,
                                    mask, connectivity, hole_min_area))
    return components


def trace_boundary(component: Component) -> list[tuple[int, int]]:
    """Moore boundary trace of a component: clockwise, starting at the
    top-left-most pixel, returned as a closed cycle (closure implicit)."""
    mask = component._mask
    ox, oy = component.bbox[0], component.bbox[1]
    h, w = mask.shape

    # top-most row, then left-most column
    first_rows = np.flatnonzero(mask.any(axis=1))
    sy = int(first_rows[0])
    sx = int(np.flatnonzero(mask[sy])[0])

    def fg(x: int, y: int) -> bool:
        return 0 <= x < w and 0 <= y < h and mask[y, x]

    if not any(fg(sx + dx, sy + dy) for dx, dy in _MOORE):
        return [(sx + ox, sy + oy)]

    contour = [(sx, sy)]
    px, py = sx, sy
    bx, by = sx - 1, sy  # west of start: background by start minimality
    first_move: tuple[int, int] | None = None
    limit = 4 * component.area + 16
    while limit > 0:
        limit -= 1
        start_dir = _MOORE_INDEX[(bx - px, by - py)]
        nx = ny = None
        for k in range(1, 9):
            dx, dy = _MOORE[(start_dir + k) % 8]
            cx, cy = px + dx, py + dy
            if fg(cx, cy):
                nx, ny = cx, cy
                break
            bx, by = cx, cy
        if (px, py) == (sx, sy) and first_move is not None and (nx, ny) == first_move:
            break
        if first_move is None:
            first_move = (nx, ny)
        contour.append((nx, ny))
        px, py = nx, ny
    if len(contour) > 1 and contour[-1] == contour[0]:
        contour.pop()
    return [(x + ox, y + oy) for x, y in contour]


def _cycle_length(contour: list[tuple[int, int]]) -> float:
    if len(contour) < 2:
        return 0.0
    total = 0.0
    for i in range(len(contour)):
        x0, y0 = contour[i]
        x1, y1 = contour[(i + 1) % len(contour)]
        total += _SQRT2 if (x0 != x1 and y0 != y1) else 1.0
    return total


def _polygon_area(contour: list[tuple[int, int]]) -> float:
    if len(contour) < 3:
        return 0.0
    acc = 0
    for i in range(len(contour)):
        x0, y0 = contour[i]
        x1, y1 = contour[(i + 1) % len(contour)]
        acc += x0 * y1 - x1 * y0
    return abs(acc) / 2.0


@dataclass(frozen=True)
class FeatureVector:
    area: int
    perimeter: float
    circularity: float
    aspect_ratio: float
    extent: float
    hole_count: int
    fill_ratio: float
    elongation: float
    orientation_deg: float


def features(component: Component) -> FeatureVector:
    """Geometric descriptors of a component. Raises DegenerateComponent
    for areas below 4 pixels, where shape measures are meaningless."""
    if component.area < DEGENERATE_AREA:
        raise DegenerateComponent(
            f"area {component.area} below {DEGENERATE_AREA}")

    x, y, w, h = component.bbox
    boundary = component.boundary
    perimeter = component.perimeter
    poly_area = _polygon_area(boundary)
    circularity = 4.0 * math.pi * poly_area / (perimeter * perimeter) if perimeter > 0 else 0.0

    xs, ys = component._coords
    cx, cy = component.centroid
    dx = xs - cx
    dy = ys - cy
    n = component.area
    # +1/12 treats each pixel as a unit square, keeping thin shapes finite
    mu20 = float(np.dot(dx, dx)) / n + 1.0 / 12.0
    mu02 = float(np.dot(dy, dy)) / n + 1.0 / 12.0
    mu11 = float(np.dot(dx, dy)) / n

    trace = mu20 + mu02
    spread = math.hypot(mu20 - mu02, 2.0 * mu11)
    lam_max = (trace + spread) / 2.0
    lam_min = (trace - spread) / 2.0
    elongation = lam_max / lam_min

    if spread < 1e-12:
        orientation = 0.0
    else:
        vx, vy = mu11, lam_max - mu20
        if abs(vx) < 1e-12 and abs(vy) < 1e-12:
            vx, vy = 1.0, 0.0
        orientation = math.degrees(math.atan2(-vx, -vy)) % 180.0

    return FeatureVector(
        area=component.area,
        perimeter=perimeter,
        circularity=circularity,
        aspect_ratio=max(w, h) / min(w, h),
        extent=component.area / (w * h),
        hole_count=component.hole_count,
        fill_ratio=component.area / component.enclosed_area,
        elongation=elongation,
        orientation_deg=orientation,
    )


def principal_axis_vector(orientation_deg: float) -> tuple[float, float]:
    """Unit vector of the principal axis in image coordinates, pointing
    into the upper half-plane for the stated angle-from-vertical."""
    rad = math.radians(orientation_deg)
    return (-math.sin(rad), -math.cos(rad))
