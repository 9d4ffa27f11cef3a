/** Session state for one transcription: captured ink, the latest
 * recognition outcome (as an editable review model), selection, and the
 * save/finalize lifecycle.
 *
 * Transitions are pure functions so they can be tested without a DOM.
 * Recognition uses sequence numbers: at most one logical request is
 * current, and responses for anything but the newest issued sequence are
 * discarded (latest strokes win). A fresh outcome replaces the model
 * wholesale; local edits only ever happen through the review actions.
 */

import type { CatalogEntry, Point, StrokePayload, SwmlJson } from "./types.js";
import {
  ReviewModel,
  deleteGlyph,
  fromSwml,
  moveGlyph,
  promoteUnrecognized,
  reassignCode,
} from "./review.js";

export type Selection =
  | { kind: "glyph"; box: number; index: number }
  | { kind: "unrecognized"; index: number };

export interface SessionState {
  canvasW: number;
  canvasH: number;
  strokes: Point[][];
  model: ReviewModel | null;
  selection: Selection | null;
  docId: string | null;
  finalized: boolean;
  dirty: boolean;
  issuedSeq: number;
  appliedSeq: number;
  banner: string | null;
}

export const PEN_UP_DEBOUNCE_MS = 300;

export function newSession(canvasW: number, canvasH: number): SessionState {
  return {
    canvasW,
    canvasH,
    strokes: [],
    model: null,
    selection: null,
    docId: null,
    finalized: false,
    dirty: false,
    issuedSeq: 0,
    appliedSeq: 0,
    banner: null,
  };
}

export function addStroke(state: SessionState, stroke: Point[]): SessionState {
  if (state.finalized || stroke.length === 0) return state;
  return { ...state, strokes: [...state.strokes, stroke] };
}

export function strokePayload(state: SessionState): StrokePayload {
  return {
    canvas: { w: state.canvasW, h: state.canvasH },
    strokes: state.strokes.map((s) => s.map(([x, y]) => [x, y])),
  };
}

/** Issue a recognition sequence number, or null when there is no ink to
 * send (the empty-ink error is avoided client-side). */
export function beginRecognition(state: SessionState): [SessionState, number | null] {
  if (state.strokes.length === 0 || state.finalized) return [state, null];
  const seq = state.issuedSeq + 1;
  return [{ ...state, issuedSeq: seq }, seq];
}

/** Install a recognition outcome, replacing the model wholesale. Stale
 * responses (an older sequence than the newest issued) are discarded. */
export function applyRecognition(state: SessionState, seq: number, swml: SwmlJson): SessionState {
  if (seq !== state.issuedSeq || seq <= state.appliedSeq) return state;
  return {
    ...state,
    model: fromSwml(swml),
    selection: null,
    dirty: false,
    appliedSeq: seq,
    banner: null,
  };
}

/** Recognition failed (offline, 5xx): keep the ink, raise a banner. */
export function recognitionFailed(state: SessionState, seq: number, message: string): SessionState {
  if (seq !== state.issuedSeq) return state;
  return { ...state, banner: message };
}

export function clearBanner(state: SessionState): SessionState {
  return { ...state, banner: null };
}

export function select(state: SessionState, selection: Selection | null): SessionState {
  if (selection !== null && !selectionValid(state.model, selection)) return state;
  return { ...state, selection };
}

export function selectionValid(model: ReviewModel | null, selection: Selection | null): boolean {
  if (selection === null) return true;
  if (model === null) return false;
  if (selection.kind === "glyph") {
    return selection.box < model.boxes.length
      && selection.index < model.boxes[selection.box].length;
  }
  return selection.index < model.unrecognized.length;
}

function edit(state: SessionState, model: ReviewModel): SessionState {
  return { ...state, model, selection: null, dirty: true };
}

export function deleteSelected(state: SessionState): SessionState {
  if (state.finalized || state.model === null) return state;
  if (state.selection?.kind !== "glyph") return state;
  return edit(state, deleteGlyph(state.model, state.selection.box, state.selection.index));
}

/** Reassign the selected glyph's code via the catalog picker; codes not
 * present in the catalog are blocked here, before any request. */
export function reassignSelected(
  state: SessionState,
  code: string,
  catalog: CatalogEntry[],
): SessionState {
  if (state.finalized || state.model === null) return state;
  if (state.selection?.kind !== "glyph") return state;
  if (!isKnownCode(code, catalog)) {
    return { ...state, banner: `unknown code ${code}` };
  }
  return edit(state, reassignCode(state.model, state.selection.box, state.selection.index, code));
}

export function promoteSelected(
  state: SessionState,
  code: string,
  catalog: CatalogEntry[],
): SessionState {
  if (state.finalized || state.model === null) return state;
  if (state.selection?.kind !== "unrecognized") return state;
  if (!isKnownCode(code, catalog)) {
    return { ...state, banner: `unknown code ${code}` };
  }
  return edit(state, promoteUnrecognized(state.model, state.selection.index, code));
}

export function moveSelectedToBox(state: SessionState, targetBox: number): SessionState {
  if (state.finalized || state.model === null) return state;
  if (state.selection?.kind !== "glyph") return state;
  if (targetBox < 0 || targetBox >= state.model.boxes.length) return state;
  return edit(state, moveGlyph(state.model, state.selection.box, state.selection.index, targetBox));
}

export function markSaved(state: SessionState, docId: string): SessionState {
  return { ...state, docId, dirty: false };
}

export function markFinalized(state: SessionState): SessionState {
  return { ...state, finalized: true, dirty: false, selection: null };
}

/** A code is known when the catalog lists it exactly, or lists its
 * rotation-01 form with enough orientation steps (same folding rule the
 * service's catalog applies). */
export function isKnownCode(code: string, catalog: CatalogEntry[]): boolean {
  if (catalog.some((entry) => entry.code === code)) return true;
  const rotation = parseInt(code.slice(-2), 10);
  if (!Number.isFinite(rotation) || rotation < 2) return false;
  const base = `${code.slice(0, -2)}01`;
  const entry = catalog.find((e) => e.code === base);
  return entry !== undefined && rotation <= entry.orientation_steps;
}

/** Pen-up debouncer: collapses a burst of pen-ups into one recognition
 * trigger after the quiet period. */
export class PenUpDebouncer {
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly fire: () => void,
    private readonly delayMs: number = PEN_UP_DEBOUNCE_MS,
  ) {}

  penUp(): void {
    this.cancel();
    this.timer = setTimeout(() => {
      this.timer = null;
      this.fire();
    }, this.delayMs);
  }

  cancel(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }
}
