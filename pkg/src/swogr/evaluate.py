"""Scoring predicted transcriptions against gold ones.

Glyphs are matched greedily by descending IoU; a pair counts as a true
positive when the boxes overlap with IoU >= 0.5 and the codes are equal.
Greedy matching is deterministic and, at page scale, agrees with
exhaustive pairing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import IswaCode
from .swml import BBox, SwmlDocument

IOU_THRESHOLD = 0.5

PageGlyph = tuple[IswaCode, BBox]


def iou(a: BBox, b: BBox) -> float:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    ix = max(0, min(ax + aw, bx + bw) - max(ax, bx))
    iy = max(0, min(ay + ah, by + bh) - max(ay, by))
    inter = ix * iy
    if inter == 0:
        return 0.0
    return inter / (aw * ah + bw * bh - inter)


def page_glyphs(doc: SwmlDocument) -> list[PageGlyph]:
    return [(code, bbox) for code, bbox, _ in doc.page_glyphs()]


@dataclass(frozen=True)
class CategoryScore:
    true_positives: int
    false_positives: int
    false_negatives: int

    @property
    def precision(self) -> float:
        denom = self.true_positives + self.false_positives
        return self.true_positives / denom if denom else 1.0

    @property
    def recall(self) -> float:
        denom = self.true_positives + self.false_negatives
        return self.true_positives / denom if denom else 1.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


@dataclass(frozen=True)
class EvalReport:
    true_positives: int
    false_positives: int
    false_negatives: int
    per_category: dict[int, CategoryScore]

    @property
    def precision(self) -> float:
        denom = self.true_positives + self.false_positives
        return self.true_positives / denom if denom else 1.0

    @property
    def recall(self) -> float:
        denom = self.true_positives + self.false_negatives
        return self.true_positives / denom if denom else 1.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


def match_glyphs(gold: list[PageGlyph], pred: list[PageGlyph]
                 ) -> list[tuple[int, int]]:
    """Greedy highest-IoU pairing over code-equal pairs with IoU >= 0.5.
    Returns (gold index, pred index) pairs; ties break by index order."""
    candidates = []
    for i, (gcode, gbox) in enumerate(gold):
        for j, (pcode, pbox) in enumerate(pred):
            if gcode != pcode:
                continue
            overlap = iou(gbox, pbox)
            if overlap >= IOU_THRESHOLD:
                candidates.append((-overlap, i, j))
    candidates.sort()
    used_gold: set[int] = set()
    used_pred: set[int] = set()
    pairs = []
    for _, i, j in candidates:
        if i in used_gold or j in used_pred:
            continue
        used_gold.add(i)
        used_pred.add(j)
        pairs.append((i, j))
    return pairs


def evaluate(gold: SwmlDocument, pred: SwmlDocument) -> EvalReport:
    gold_glyphs = page_glyphs(gold)
    pred_glyphs = page_glyphs(pred)
    pairs = match_glyphs(gold_glyphs, pred_glyphs)
    matched_gold = {i for i, _ in pairs}
    matched_pred = {j for _, j in pairs}

    per_category: dict[int, dict[str, int]] = {}

    def bucket(category: int) -> dict[str, int]:
        return per_category.setdefault(category, {"tp": 0, "fp": 0, "fn": 0})

    for i, (code, _) in enumerate(gold_glyphs):
        bucket(code.category)["tp" if i in matched_gold else "fn"] += 1
    for j, (code, _) in enumerate(pred_glyphs):
        if j not in matched_pred:
            bucket(code.category)["fp"] += 1

    scores = {cat: CategoryScore(c["tp"], c["fp"], c["fn"])
              for cat, c in sorted(per_category.items())}
    return EvalReport(
        true_positives=len(pairs),
        false_positives=len(pred_glyphs) - len(pairs),
        false_negatives=len(gold_glyphs) - len(pairs),
        per_category=scores,
    )
