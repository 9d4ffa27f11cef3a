/** The editable review model and the correction actions.
 *
 * Internally glyphs live in page coordinates grouped by sign; converting
 * to the SWML wire form assigns contiguous ids, computes each sign box
 * as the union of its members, and rebases glyph coordinates. Every
 * action returns a fresh model; empty sign boxes never survive an edit.
 */

import type { BBoxJson, SourceInfo, SwmlJson } from "./types.js";

export interface PageGlyph {
  code: string;
  bbox: BBoxJson; // page frame
  confidence: number;
}

export interface ReviewModel {
  source: SourceInfo;
  boxes: PageGlyph[][];
  unrecognized: BBoxJson[];
}

function union(boxes: BBoxJson[]): BBoxJson {
  const x0 = Math.min(...boxes.map((b) => b.x));
  const y0 = Math.min(...boxes.map((b) => b.y));
  const x1 = Math.max(...boxes.map((b) => b.x + b.w));
  const y1 = Math.max(...boxes.map((b) => b.y + b.h));
  return { x: x0, y: y0, w: x1 - x0, h: y1 - y0 };
}

export function fromSwml(doc: SwmlJson): ReviewModel {
  return {
    source: { ...doc.source },
    boxes: doc.signboxes.map((box) =>
      box.glyphs.map((g) => ({
        code: g.code,
        bbox: { x: box.x + g.x, y: box.y + g.y, w: g.w, h: g.h },
        confidence: g.confidence,
      })),
    ),
    unrecognized: doc.unrecognized.map((b) => ({ ...b })),
  };
}

export function toSwml(model: ReviewModel): SwmlJson {
  const withBounds = model.boxes
    .filter((glyphs) => glyphs.length > 0)
    .map((glyphs) => ({ glyphs, bounds: union(glyphs.map((g) => g.bbox)) }));
  withBounds.sort((a, b) => a.bounds.x - b.bounds.x || a.bounds.y - b.bounds.y);
  return {
    version: "1.0",
    source: { ...model.source },
    signboxes: withBounds.map(({ glyphs, bounds }, i) => ({
      id: i + 1,
      ...bounds,
      glyphs: glyphs
        .map((g) => ({
          code: g.code,
          x: g.bbox.x - bounds.x,
          y: g.bbox.y - bounds.y,
          w: g.bbox.w,
          h: g.bbox.h,
          confidence: g.confidence,
        }))
        .sort((a, b) => a.y - b.y || a.x - b.x),
    })),
    unrecognized: model.unrecognized
      .map((b) => ({ ...b }))
      .sort((a, b) => a.y - b.y || a.x - b.x || a.w - b.w || a.h - b.h),
  };
}

function cloned(model: ReviewModel): ReviewModel {
  return {
    source: { ...model.source },
    boxes: model.boxes.map((glyphs) => glyphs.map((g) => ({ ...g, bbox: { ...g.bbox } }))),
    unrecognized: model.unrecognized.map((b) => ({ ...b })),
  };
}

function dropEmpty(model: ReviewModel): ReviewModel {
  model.boxes = model.boxes.filter((glyphs) => glyphs.length > 0);
  return model;
}

export function glyphCount(model: ReviewModel): number {
  return model.boxes.reduce((n, glyphs) => n + glyphs.length, 0);
}

export function deleteGlyph(model: ReviewModel, box: number, index: number): ReviewModel {
  const next = cloned(model);
  next.boxes[box].splice(index, 1);
  return dropEmpty(next);
}

export function reassignCode(model: ReviewModel, box: number, index: number, code: string): ReviewModel {
  const next = cloned(model);
  next.boxes[box][index].code = code;
  return next;
}

/** Turn an unrecognized region into a glyph with the chosen code; it
 * becomes its own sign box (review can then move it where it belongs). */
export function promoteUnrecognized(model: ReviewModel, index: number, code: string): ReviewModel {
  const next = cloned(model);
  const [bbox] = next.unrecognized.splice(index, 1);
  next.boxes.push([{ code, bbox, confidence: 1.0 }]);
  return next;
}

export function moveGlyph(model: ReviewModel, fromBox: number, index: number, toBox: number): ReviewModel {
  if (fromBox === toBox) return cloned(model);
  const next = cloned(model);
  const [glyph] = next.boxes[fromBox].splice(index, 1);
  next.boxes[toBox].push(glyph);
  return dropEmpty(next);
}
