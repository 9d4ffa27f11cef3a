"""The glyph recognizer: an ordered rule cascade over geometric features,
followed by spatial grouping of glyphs into sign boxes.

Recognition is deliberately rule-driven rather than trained: the symbol
inventory is far too large to collect labeled handwriting for, so each
shipped rule tests a handful of shape descriptors (circularity, holes,
elongation, extent) against configurable thresholds. Rules are registered
with unique priorities and evaluated in order; on the shipped archetypes
at most one rule fires for any component, so the order is a formality.

All thresholds live in RecognizerConfig and default to values that
separate the shipped archetypes on synthetic renders; handwriting corpora
will want to tune them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .catalog import SymbolCatalog
from .codes import IswaCode
from .errors import ConfigError, EmptyInk, InvalidCascade
from .raster import (BinaryImage, Component, FeatureVector, GrayImage,
                     binarize_otsu, connected_components, features,
                     principal_axis_vector)
from .swml import Glyph, SignBox, Source, SwmlDocument

BBox = tuple[int, int, int, int]


@dataclass(frozen=True)
class RecognizerConfig:
    """Tuning knobs for the rule cascade and sign segmentation.

    tau_circ: head circularity threshold.
    tau_fill: filled-vs-outline fill_ratio cut (sets the fill digit).
    tau_elong: arrow elongation threshold.
    tau_extent_square: bbox coverage needed to call a blob a filled square.
    min_area: components below this many pixels are speckle and dropped.
    signbox_gap: max vertical gap (px) between glyphs of one sign.
    column_overlap: min horizontal bbox overlap, as a fraction of the
        narrower glyph, for two glyphs to share a sign column.
    """

    tau_circ: float = 0.80
    tau_fill: float = 0.60
    tau_elong: float = 3.0
    tau_extent_square: float = 0.80
    min_area: int = 16
    signbox_gap: int = 40
    column_overlap: float = 0.3

    def __post_init__(self):
        for name in ("tau_circ", "tau_fill", "tau_extent_square", "column_overlap"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ConfigError(f"{name} must be in (0, 1], got {v}")
        if self.tau_elong < 1.0:
            raise ConfigError(f"tau_elong must be >= 1, got {self.tau_elong}")
        if self.min_area < 0:
            raise ConfigError(f"min_area must be >= 0, got {self.min_area}")
        if self.signbox_gap < 0:
            raise ConfigError(f"signbox_gap must be >= 0, got {self.signbox_gap}")

    @staticmethod
    def from_mapping(values: dict) -> "RecognizerConfig":
        fields = RecognizerConfig.__dataclass_fields__
        kwargs = {}
        for key, raw in values.items():
            if key not in fields:
                raise ConfigError(f"unknown config key {key!r}")
            kind = fields[key].type
            try:
                kwargs[key] = int(raw) if kind == "int" else float(raw)
            except (TypeError, ValueError):
                raise ConfigError(f"bad value for {key}: {raw!r}") from None
        return RecognizerConfig(**kwargs)

    @staticmethod
    def from_file(path) -> "RecognizerConfig":
        """Read line-oriented ``key = value`` pairs; '#' starts a comment."""
        values = {}
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
                key, _, value = line.partition("=")
                values[key.strip()] = value.strip()
        return RecognizerConfig.from_mapping(values)


# -- stroke input -------------------------------------------------------------

@dataclass(frozen=True)
class StrokeSet:
    """Freehand input from a drawing surface: polylines on a canvas.

    Wire form: {"canvas": {"w": int, "h": int},
                "strokes": [[[x, y], ...], ...]} with pixel coordinates.
    """

    canvas_w: int
    canvas_h: int
    strokes: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self):
        if self.canvas_w < 1 or self.canvas_h < 1:
            raise ValueError(f"canvas {self.canvas_w}x{self.canvas_h} invalid")

    @staticmethod
    def from_wire(data) -> "StrokeSet":
        try:
            canvas = data["canvas"]
            w, h = int(canvas["w"]), int(canvas["h"])
            strokes = tuple(
                tuple((int(p[0]), int(p[1])) for p in stroke)
                for stroke in data["strokes"])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ValueError(f"bad stroke payload: {exc}") from None
        return StrokeSet(w, h, strokes)

    def to_wire(self) -> dict:
        return {"canvas": {"w": self.canvas_w, "h": self.canvas_h},
                "strokes": [[[x, y] for x, y in s] for s in self.strokes]}


def rasterize_strokes(strokes: StrokeSet, pen_radius: float = 1.0) -> GrayImage:
    """Paint polylines onto a white canvas with a round 2-px pen.

    Points between samples are filled by linear interpolation; ink
    outside the canvas is clipped away. Raises EmptyInk when there are
    no strokes at all.
    """
    if not strokes.strokes:
        raise EmptyInk("stroke set contains no strokes")
    page = np.full((strokes.canvas_h, strokes.canvas_w), 255, dtype=np.uint8)
    for stroke in strokes.strokes:
        if not stroke:
            continue
        points = list(stroke)
        if len(points) == 1:
            points = points * 2
        for (x0, y0), (x1, y1) in zip(points, points[1:]):
            _stamp_segment(page, x0, y0, x1, y1, pen_radius)
    return GrayImage(page)


def _stamp_segment(page: np.ndarray, x0, y0, x1, y1, radius: float):
    h, w = page.shape
    r = int(math.ceil(radius))
    lo_x = max(0, min(x0, x1) - r)
    hi_x = min(w - 1, max(x0, x1) + r)
    lo_y = max(0, min(y0, y1) - r)
    hi_y = min(h - 1, max(y0, y1) + r)
    if lo_x > hi_x or lo_y > hi_y:
        return
    xs = np.arange(lo_x, hi_x + 1, dtype=np.float64)
    ys = np.arange(lo_y, hi_y + 1, dtype=np.float64)
    gx, gy = np.meshgrid(xs, ys)
    dx, dy = float(x1 - x0), float(y1 - y0)
    seg_len2 = dx * dx + dy * dy
    if seg_len2 == 0.0:
        dist2 = (gx - x0) ** 2 + (gy - y0) ** 2
    else:
        t = np.clip(((gx - x0) * dx + (gy - y0) * dy) / seg_len2, 0.0, 1.0)
        dist2 = (gx - (x0 + t * dx)) ** 2 + (gy - (y0 + t * dy)) ** 2
    window = page[lo_y:hi_y + 1, lo_x:hi_x + 1]
    window[dist2 <= radius * radius] = 0


# -- rotation digits ----------------------------------------------------------

def rotation_octant(orientation_deg: float, has_direction: bool = False,
                    tip_end: tuple[float, float] | None = None) -> int:
    """Map an orientation to the 1..8 rotation digit (step 1 = up, each
    step 45 degrees counterclockwise on screen).

    Undirected shapes use the principal axis alone and land in octants
    1..4. Directed shapes pass tip_end, an image-frame vector toward the
    tip, which picks between the two half-axes. Exact half-step ties
    round toward the lower octant.
    """
    if has_direction and tip_end is not None:
        tx, ty = tip_end
        delta = math.degrees(math.atan2(-tx, -ty)) % 360.0
        step = int(math.ceil(delta / 45.0 - 0.5)) % 8
        return step + 1
    step = int(math.ceil(orientation_deg / 45.0 - 0.5)) % 4
    return step + 1


# -- the rule cascade ---------------------------------------------------------

Predicate = Callable[[FeatureVector, RecognizerConfig], bool]
CodeBuilder = Callable[[FeatureVector, Optional[Component], RecognizerConfig],
                       Optional[IswaCode]]
Margin = Callable[[FeatureVector, RecognizerConfig], float]


@dataclass(frozen=True)
class ClassifierRule:
    """One entry of the cascade: a feature predicate, a code builder, and
    a normalized margin (0 at the decision boundary, 1 at the ideal) that
    feeds the confidence score."""

    name: str
    priority: int
    predicate: Predicate
    code_builder: CodeBuilder
    margin: Margin


def _confidence(margin: float) -> float:
    # One minus the normalized distance of the deciding feature from its
    # ideal, scaled to land on 0.5 exactly at the threshold.
    return max(0.5, min(1.0, 0.5 + 0.5 * margin))


def _fill_digit(fv: FeatureVector, cfg: RecognizerConfig) -> int:
    return 2 if fv.fill_ratio >= cfg.tau_fill else 1


def _undirected_rotation(fv: FeatureVector) -> int:
    # Near-isotropic blobs have no meaningful axis; pin them upright.
    if fv.elongation < 1.15:
        return 1
    return rotation_octant(fv.orientation_deg)


def detect_head(fv: FeatureVector, cfg: RecognizerConfig) -> IswaCode | None:
    """Head symbols are round outlines: high boundary circularity, one
    enclosed hole, nearly square bbox. The fill digit is always 1."""
    if (fv.circularity >= cfg.tau_circ and fv.hole_count == 1
            and fv.aspect_ratio <= 1.3):
        return IswaCode(4, 1, 1, 1, 1, 1)
    return None


def detect_arrow(component: Component, fv: FeatureVector,
                 cfg: RecognizerConfig) -> IswaCode | None:
    """Straight movement arrows: an elongated stroke whose width profile
    shows exactly one pronounced peak at an end (the arrowhead).

    The component is sampled along its principal axis in unit bins; the
    arrowhead end is the one whose local width maximum exceeds 1.8x the
    median shaft width. No unique peak means no match.
    """
    if fv.elongation < cfg.tau_elong:
        return None
    ux, uy = principal_axis_vector(fv.orientation_deg)
    xs, ys = component._coords
    cx, cy = component.centroid
    t = (xs - cx) * ux + (ys - cy) * uy
    bins = np.round(t).astype(np.int64)
    bins -= bins.min()
    profile = np.bincount(bins).astype(np.float64)
    profile = profile[profile > 0]
    if profile.size < 6:
        return None
    median_width = float(np.median(profile))
    window = max(2, profile.size // 4)
    low_peak = float(profile[:window].max())
    high_peak = float(profile[-window:].max())
    threshold = 1.8 * median_width
    low_is_head = low_peak > threshold
    high_is_head = high_peak > threshold
    if low_is_head == high_is_head:
        return None
    tip = (ux, uy) if high_is_head else (-ux, -uy)
    rotation = rotation_octant(fv.orientation_deg, has_direction=True, tip_end=tip)
    return IswaCode(2, 1, 1, 1, _fill_digit(fv, cfg), rotation)


# Best circularity a discrete round boundary actually reaches; the margin
# for circularity-decided rules normalizes against this, not the analytic 1.0.
CIRC_IDEAL = 0.90


def _ratio_margin(value: float, threshold: float, ideal: float) -> float:
    if ideal == threshold:
        return 1.0
    return (value - threshold) / (ideal - threshold)


def default_cascade() -> list[ClassifierRule]:
    """The shipped rules, one per archetype shape family."""

    def head_rule(fv, cfg):
        return fv.circularity >= cfg.tau_circ and fv.hole_count == 1 \
            and fv.aspect_ratio <= 1.3

    def dot_rule(fv, cfg):
        return fv.hole_count == 0 and fv.circularity >= cfg.tau_circ \
            and fv.fill_ratio >= cfg.tau_fill

    def fist_rule(fv, cfg):
        return fv.hole_count == 1 and fv.aspect_ratio <= 1.3 \
            and fv.circularity < cfg.tau_circ

    def fist_back_rule(fv, cfg):
        return fv.hole_count == 0 and fv.aspect_ratio <= 1.3 \
            and fv.extent >= cfg.tau_extent_square

    def index_rule(fv, cfg):
        return fv.hole_count == 1 and fv.aspect_ratio > 1.3 \
            and fv.elongation < cfg.tau_elong

    def arrow_rule(fv, cfg):
        return fv.hole_count == 0 and fv.elongation >= cfg.tau_elong

    def star_rule(fv, cfg):
        return fv.hole_count == 0 and fv.aspect_ratio <= 1.3 \
            and fv.elongation < cfg.tau_elong \
            and fv.extent < cfg.tau_extent_square \
            and fv.circularity < cfg.tau_circ

    def fixed(cat, grp, base, fill=None, rotate=False):
        def build(fv, comp, cfg):
            f = fill if fill is not None else _fill_digit(fv, cfg)
            r = _undirected_rotation(fv) if rotate else 1
            return IswaCode(cat, grp, base, 1, f, r)
        return build

    return [
        ClassifierRule(
            "head", 10, head_rule,
            lambda fv, comp, cfg: detect_head(fv, cfg),
            lambda fv, cfg: _ratio_margin(fv.circularity, cfg.tau_circ, CIRC_IDEAL)),
        ClassifierRule(
            "dot", 20, dot_rule, fixed(5, 1, 1),
            lambda fv, cfg: _ratio_margin(fv.circularity, cfg.tau_circ, CIRC_IDEAL)),
        ClassifierRule(
            "fist", 30, fist_rule, fixed(1, 10, 1, fill=1),
            lambda fv, cfg: _ratio_margin(fv.aspect_ratio, 1.3, 1.0)),
        ClassifierRule(
            "fist-back", 40, fist_back_rule, fixed(1, 10, 1, fill=2),
            lambda fv, cfg: _ratio_margin(fv.extent, cfg.tau_extent_square, 1.0)),
        ClassifierRule(
            "index-hand", 50, index_rule, fixed(1, 1, 1, fill=1),
            lambda fv, cfg: _ratio_margin(fv.aspect_ratio, 1.3, 1.75)),
        ClassifierRule(
            "arrow", 60, arrow_rule,
            lambda fv, comp, cfg: detect_arrow(comp, fv, cfg) if comp is not None else None,
            lambda fv, cfg: _ratio_margin(fv.elongation, cfg.tau_elong, 2.0 * cfg.tau_elong)),
        ClassifierRule(
            "contact", 70, star_rule, fixed(2, 5, 1, fill=2),
            lambda fv, cfg: _ratio_margin(fv.extent, cfg.tau_extent_square, 0.0)),
    ]


@dataclass(frozen=True)
class Candidate:
    rule: str
    code: IswaCode
    confidence: float


def classify_component(fv: FeatureVector, cascade: list[ClassifierRule],
                       cfg: RecognizerConfig,
                       component: Component | None = None) -> Candidate | None:
    """Run the cascade in ascending priority; the first rule whose
    predicate holds and whose builder yields a code wins. A matching
    predicate with an abstaining builder (an ambiguous arrow, say) falls
    through to later rules."""
    ordered = sorted(cascade, key=lambda r: r.priority)
    priorities = [r.priority for r in ordered]
    if len(set(priorities)) != len(priorities):
        raise InvalidCascade(f"duplicate priorities in {priorities}")
    for rule in ordered:
        if not rule.predicate(fv, cfg):
            continue
        code = rule.code_builder(fv, component, cfg)
        if code is None:
            continue
        return Candidate(rule.name, code, _confidence(rule.margin(fv, cfg)))
    return None


# -- sign segmentation --------------------------------------------------------

def _linked(a: BBox, b: BBox, cfg: RecognizerConfig) -> bool:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    overlap = min(ax + aw, bx + bw) - max(ax, bx)
    if overlap < cfg.column_overlap * min(aw, bw):
        return False
    gap = max(ay, by) - min(ay + ah, by + bh)
    return gap <= cfg.signbox_gap


def segment_signs(glyphs: list[Glyph], page_size: tuple[int, int],
                  cfg: RecognizerConfig) -> list[SignBox]:
    """Single-linkage clustering of page-frame glyphs into sign boxes.

    Two glyphs link when their bboxes share enough of a column and sit
    within the vertical gap budget. Boxes are ordered by (x, then y) and
    glyph coordinates are rebased to each box origin.
    """
    n = len(glyphs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if _linked(glyphs[i].bbox, glyphs[j].bbox, cfg):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri

    clusters: dict[int, list[Glyph]] = {}
    for i, g in enumerate(glyphs):
        clusters.setdefault(find(i), []).append(g)

    def cluster_bbox(members: list[Glyph]) -> BBox:
        x0 = min(g.bbox[0] for g in members)
        y0 = min(g.bbox[1] for g in members)
        x1 = max(g.bbox[0] + g.bbox[2] for g in members)
        y1 = max(g.bbox[1] + g.bbox[3] for g in members)
        return (x0, y0, x1 - x0, y1 - y0)

    ordered = sorted(clusters.values(),
                     key=lambda ms: (cluster_bbox(ms)[0], cluster_bbox(ms)[1]))
    boxes = []
    for box_id, members in enumerate(ordered, start=1):
        bx, by, bw, bh = cluster_bbox(members)
        rebased = tuple(
            Glyph(g.code, (g.bbox[0] - bx, g.bbox[1] - by, g.bbox[2], g.bbox[3]),
                  g.confidence)
            for g in members)
        boxes.append(SignBox(box_id, (bx, by, bw, bh), rebased))
    return boxes


# -- the full pipeline --------------------------------------------------------

@dataclass(frozen=True)
class RecognitionOutcome:
    """What one page recognizes to: glyphs in the page frame, leftovers,
    the sign grouping, and stage timings in milliseconds."""

    page_size: tuple[int, int]
    glyphs: tuple[Glyph, ...]
    unrecognized: tuple[BBox, ...]
    signboxes: tuple[SignBox, ...]
    timing: dict = field(default_factory=dict)
    threshold: int = 0

    def to_document(self, image_name: str) -> SwmlDocument:
        return SwmlDocument(
            Source(image_name, self.page_size[0], self.page_size[1]),
            self.signboxes, self.unrecognized)


def recognize_page(image: GrayImage, catalog: SymbolCatalog,
                   cfg: RecognizerConfig | None = None,
                   cascade: list[ClassifierRule] | None = None) -> RecognitionOutcome:
    """Binarize, find components, classify each against the cascade, and
    group the glyphs into signs. Deterministic for identical inputs.

    Components at or above min_area always land in exactly one of
    glyphs/unrecognized; codes the catalog does not know are demoted to
    unrecognized so the output stays reviewable.
    """
    cfg = cfg or RecognizerConfig()
    cascade = cascade if cascade is not None else default_cascade()

    t0 = time.perf_counter()
    binary, threshold = binarize_otsu(image)
    t1 = time.perf_counter()
    components = connected_components(binary, connectivity=8)
    t2 = time.perf_counter()

    glyphs: list[Glyph] = []
    unrecognized: list[BBox] = []
    for comp in components:
        if comp.area < cfg.min_area:
            continue
        candidate = classify_component(features(comp), cascade, cfg, comp)
        if candidate is not None and candidate.code in catalog:
            glyphs.append(Glyph(candidate.code, comp.bbox, candidate.confidence))
        else:
            unrecognized.append(comp.bbox)
    t3 = time.perf_counter()
    boxes = segment_signs(glyphs, (image.width, image.height), cfg)
    t4 = time.perf_counter()

    timing = {
        "binarize_ms": (t1 - t0) * 1000.0,
        "components_ms": (t2 - t1) * 1000.0,
        "classify_ms": (t3 - t2) * 1000.0,
        "segment_ms": (t4 - t3) * 1000.0,
        "total_ms": (t4 - t0) * 1000.0,
    }
    unrecognized.sort(key=lambda b: (b[1], b[0], b[2], b[3]))
    return RecognitionOutcome((image.width, image.height), tuple(glyphs),
                              tuple(unrecognized), tuple(boxes), timing,
                              threshold)


def recognize_strokes(strokes: StrokeSet, catalog: SymbolCatalog,
                      cfg: RecognizerConfig | None = None) -> RecognitionOutcome:
    """Rasterize freehand strokes and run the page pipeline on the result.
    Raises EmptyInk when the stroke set is empty."""
    image = rasterize_strokes(strokes)
    return recognize_page(image, catalog, cfg)
