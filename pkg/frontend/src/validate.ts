/** Client-side document validation mirroring the rules the service
 * enforces (same spec, independent code), so a save that would 422 is
 * caught before the request and server errors can be mapped back onto
 * the offending element. */

import type { SwmlJson } from "./types.js";

export interface Problem {
  path: string;
  message: string;
}

const CODE_PATTERN = /^(\d{2})-(\d{2})-(\d{3})-(\d{2})-(\d{2})-(\d{2})$/;
const FIELD_MAX = [7, 99, 999, 99, 99, 99];

export function isValidCode(text: string): boolean {
  const match = CODE_PATTERN.exec(text);
  if (!match) return false;
  return match.slice(1).every((digits, i) => {
    const value = parseInt(digits, 10);
    return value >= 1 && value <= FIELD_MAX[i];
  });
}

function isInt(value: unknown): value is number {
  return typeof value === "number" && Number.isInteger(value);
}

function checkBox(
  box: { x: number; y: number; w: number; h: number },
  path: string,
  problems: Problem[],
): boolean {
  if (![box.x, box.y, box.w, box.h].every(isInt)) {
    problems.push({ path, message: "geometry must be integer" });
    return false;
  }
  if (box.w < 1 || box.h < 1) {
    problems.push({ path, message: "box must have positive size" });
    return false;
  }
  return true;
}

function checkInside(
  inner: { x: number; y: number; w: number; h: number },
  outerW: number,
  outerH: number,
  path: string,
  what: string,
  problems: Problem[],
): void {
  if (inner.x < 0 || inner.y < 0 || inner.x + inner.w > outerW || inner.y + inner.h > outerH) {
    problems.push({ path, message: `${what} escapes its container` });
  }
}

/** All schema problems in the document; an empty list means the service
 * will accept it. */
export function validateDocument(doc: SwmlJson): Problem[] {
  const problems: Problem[] = [];
  if (!doc.source || !doc.source.image || !isInt(doc.source.width) || !isInt(doc.source.height)
      || doc.source.width < 1 || doc.source.height < 1) {
    problems.push({ path: "source", message: "bad source image/size" });
    return problems;
  }
  const ids = doc.signboxes.map((b) => b.id);
  const expected = Array.from({ length: ids.length }, (_, i) => i + 1);
  if (JSON.stringify([...ids].sort((a, b) => a - b)) !== JSON.stringify(expected)) {
    problems.push({ path: "signboxes", message: `ids must be contiguous from 1, got ${ids.join(",")}` });
  }
  doc.signboxes.forEach((box, bi) => {
    const boxPath = `signboxes[${bi}]`;
    if (!checkBox(box, boxPath, problems)) return;
    checkInside(box, doc.source.width, doc.source.height, boxPath, "signbox", problems);
    box.glyphs.forEach((glyph, gi) => {
      const glyphPath = `${boxPath}.glyphs[${gi}]`;
      if (!isValidCode(glyph.code)) {
        problems.push({ path: glyphPath, message: `bad code ${glyph.code}` });
      }
      if (!checkBox(glyph, glyphPath, problems)) return;
      checkInside(glyph, box.w, box.h, glyphPath, "glyph", problems);
      if (typeof glyph.confidence !== "number" || glyph.confidence < 0 || glyph.confidence > 1) {
        problems.push({ path: glyphPath, message: `confidence ${glyph.confidence} outside [0,1]` });
      }
    });
  });
  doc.unrecognized.forEach((box, ui) => {
    const path = `unrecognized[${ui}]`;
    if (checkBox(box, path, problems)) {
      checkInside(box, doc.source.width, doc.source.height, path, "unrecognized box", problems);
    }
  });
  return problems;
}
