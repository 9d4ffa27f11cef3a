/** Overlay content derivation and hit-testing, kept DOM-free so the
 * recognition display can be asserted on directly in tests. Colors match
 * the batch annotator: glyphs green, unrecognized red, sign boxes blue. */

import type { BBoxJson } from "./types.js";
import type { ReviewModel } from "./review.js";
import type { Selection } from "./session.js";
import { toSwml } from "./review.js";

export type OverlayKind = "glyph" | "unrecognized" | "signbox";

export interface OverlayItem {
  kind: OverlayKind;
  bbox: BBoxJson;
  label?: string;
  selected: boolean;
  selection?: Selection;
}

export const OVERLAY_COLORS: Record<OverlayKind, string> = {
  glyph: "#00a000",
  unrecognized: "#c80000",
  signbox: "#0000c8",
};

export function overlayItems(model: ReviewModel | null, selection: Selection | null): OverlayItem[] {
  if (model === null) return [];
  const items: OverlayItem[] = [];
  for (const box of toSwml(model).signboxes) {
    items.push({
      kind: "signbox",
      bbox: { x: box.x - 2, y: box.y - 2, w: box.w + 4, h: box.h + 4 },
      selected: false,
    });
  }
  model.boxes.forEach((glyphs, bi) => {
    glyphs.forEach((glyph, gi) => {
      items.push({
        kind: "glyph",
        bbox: glyph.bbox,
        label: glyph.code,
        selected: selection?.kind === "glyph" && selection.box === bi && selection.index === gi,
        selection: { kind: "glyph", box: bi, index: gi },
      });
    });
  });
  model.unrecognized.forEach((bbox, ui) => {
    items.push({
      kind: "unrecognized",
      bbox,
      selected: selection?.kind === "unrecognized" && selection.index === ui,
      selection: { kind: "unrecognized", index: ui },
    });
  });
  return items;
}

function contains(bbox: BBoxJson, x: number, y: number): boolean {
  return x >= bbox.x && y >= bbox.y && x < bbox.x + bbox.w && y < bbox.y + bbox.h;
}

/** The smallest selectable element under the point, glyphs first. */
export function hitTest(model: ReviewModel | null, x: number, y: number): Selection | null {
  if (model === null) return null;
  let best: { selection: Selection; area: number } | null = null;
  model.boxes.forEach((glyphs, bi) => {
    glyphs.forEach((glyph, gi) => {
      if (contains(glyph.bbox, x, y)) {
        const area = glyph.bbox.w * glyph.bbox.h;
        if (best === null || area < best.area) {
          best = { selection: { kind: "glyph", box: bi, index: gi }, area };
        }
      }
    });
  });
  if (best !== null) return (best as { selection: Selection }).selection;
  for (let ui = 0; ui < model.unrecognized.length; ui++) {
    if (contains(model.unrecognized[ui], x, y)) {
      return { kind: "unrecognized", index: ui };
    }
  }
  return null;
}
