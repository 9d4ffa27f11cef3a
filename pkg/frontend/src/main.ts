/** Page wiring: drawing surface, live recognition overlay, review panel
 * backed by the catalog, and the save/finalize flow. */

import { TranscriberApi, ApiError } from "./api.js";
import { StrokeCapture } from "./drawing.js";
import { OVERLAY_COLORS, hitTest, overlayItems } from "./overlay.js";
import { toSwml } from "./review.js";
import {
  PenUpDebouncer,
  SessionState,
  addStroke,
  applyRecognition,
  beginRecognition,
  clearBanner,
  deleteSelected,
  markFinalized,
  markSaved,
  moveSelectedToBox,
  newSession,
  promoteSelected,
  reassignSelected,
  recognitionFailed,
  select,
  strokePayload,
} from "./session.js";
import { validateDocument } from "./validate.js";
import type { CatalogEntry } from "./types.js";

const CANVAS_W = 640;
const CANVAS_H = 640;

const api = new TranscriberApi("");
let state: SessionState = newSession(CANVAS_W, CANVAS_H);
let catalog: CatalogEntry[] = [];
let pickedCode: string | null = null;

const canvas = document.getElementById("surface") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const banner = document.getElementById("banner")!;
const status = document.getElementById("status")!;
const picker = document.getElementById("picker")!;
const searchBox = document.getElementById("search") as HTMLInputElement;

function setState(next: SessionState): void {
  state = next;
  render();
}

function render(): void {
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, CANVAS_W, CANVAS_H);
  ctx.strokeStyle = "#202020";
  ctx.lineWidth = 2;
  ctx.lineCap = "round";
  for (const stroke of [...state.strokes, [...capture.livePoints]]) {
    if (stroke.length === 0) continue;
    ctx.beginPath();
    ctx.moveTo(stroke[0][0], stroke[0][1]);
    for (const [x, y] of stroke.slice(1)) ctx.lineTo(x, y);
    ctx.stroke();
  }
  for (const item of overlayItems(state.model, state.selection)) {
    ctx.strokeStyle = OVERLAY_COLORS[item.kind];
    ctx.lineWidth = item.selected ? 3 : 1;
    ctx.strokeRect(item.bbox.x + 0.5, item.bbox.y + 0.5, item.bbox.w, item.bbox.h);
    if (item.label) {
      ctx.fillStyle = "#404040";
      ctx.font = "10px monospace";
      ctx.fillText(item.label, item.bbox.x, Math.max(10, item.bbox.y - 3));
    }
  }
  banner.textContent = state.banner ?? "";
  banner.className = state.banner ? "banner visible" : "banner";
  const glyphs = state.model ? toSwml(state.model).signboxes.reduce((n, b) => n + b.glyphs.length, 0) : 0;
  const leftovers = state.model?.unrecognized.length ?? 0;
  status.textContent = state.finalized
    ? `finalized as ${state.docId}`
    : `${glyphs} glyphs, ${leftovers} unrecognized`
      + (state.dirty ? " (unsaved edits)" : "")
      + (state.docId ? ` [${state.docId}]` : "");
  for (const id of ["delete", "reassign", "promote", "move", "save", "finalize", "rerun"]) {
    (document.getElementById(id) as HTMLButtonElement).disabled = state.finalized;
  }
}

async function runRecognition(): Promise<void> {
  const [issued, seq] = beginRecognition(state);
  if (seq === null) return; // nothing drawn: never send empty ink
  setState(issued);
  try {
    const response = await api.recognizeStrokes(strokePayload(issued));
    setState(applyRecognition(state, seq, response.swml));
  } catch (err) {
    const message = err instanceof ApiError
      ? `recognition failed (${err.message}); strokes kept`
      : "service unreachable; strokes kept";
    setState(recognitionFailed(state, seq, message));
  }
}

const debouncer = new PenUpDebouncer(() => void runRecognition());
const capture = new StrokeCapture(
  CANVAS_W,
  CANVAS_H,
  (stroke) => setState(addStroke(state, stroke)),
  () => debouncer.penUp(),
);

canvas.addEventListener("pointerdown", (event) => {
  if (state.finalized) return;
  const hit = hitTest(state.model, event.offsetX, event.offsetY);
  if (hit !== null && !event.shiftKey) {
    setState(select(state, hit));
    return;
  }
  canvas.setPointerCapture(event.pointerId);
  capture.down({ x: event.offsetX, y: event.offsetY });
});
canvas.addEventListener("pointermove", (event) => {
  if (capture.drawing) {
    capture.move({ x: event.offsetX, y: event.offsetY });
    render();
  }
});
canvas.addEventListener("pointerup", () => capture.up());

async function loadCatalog(query?: string): Promise<void> {
  try {
    catalog = await api.searchCatalog(query ? { q: query } : {});
  } catch {
    catalog = [];
  }
  picker.innerHTML = "";
  const byCategory = new Map<string, CatalogEntry[]>();
  for (const entry of catalog) {
    const group = byCategory.get(entry.category_name) ?? [];
    group.push(entry);
    byCategory.set(entry.category_name, group);
  }
  for (const [category, entries] of byCategory) {
    const heading = document.createElement("div");
    heading.className = "picker-category";
    heading.textContent = category;
    picker.appendChild(heading);
    for (const entry of entries) {
      const row = document.createElement("button");
      row.className = "picker-entry";
      row.textContent = `${entry.code}  ${entry.name}`;
      row.addEventListener("click", () => {
        pickedCode = entry.code;
        for (const el of picker.querySelectorAll(".picked")) el.classList.remove("picked");
        row.classList.add("picked");
      });
      picker.appendChild(row);
    }
  }
}

function requirePicked(): string | null {
  if (pickedCode === null) {
    setState({ ...state, banner: "pick a symbol from the catalog first" });
  }
  return pickedCode;
}

document.getElementById("rerun")!.addEventListener("click", () => {
  debouncer.cancel();
  void runRecognition();
});
document.getElementById("delete")!.addEventListener("click", () => setState(deleteSelected(state)));
document.getElementById("reassign")!.addEventListener("click", () => {
  const code = requirePicked();
  if (code !== null) setState(reassignSelected(state, code, catalog));
});
document.getElementById("promote")!.addEventListener("click", () => {
  const code = requirePicked();
  if (code !== null) setState(promoteSelected(state, code, catalog));
});
document.getElementById("move")!.addEventListener("click", () => {
  const raw = window.prompt("move selected glyph to sign box number (1-based):");
  if (raw === null) return;
  setState(moveSelectedToBox(state, parseInt(raw, 10) - 1));
});

document.getElementById("save")!.addEventListener("click", () => void save(false));
document.getElementById("finalize")!.addEventListener("click", () => void save(true));

async function save(finalize: boolean): Promise<void> {
  if (state.model === null) return;
  const swml = toSwml(state.model);
  const problems = validateDocument(swml);
  if (problems.length > 0) {
    setState({ ...state, banner: `invalid document: ${problems[0].path}: ${problems[0].message}` });
    return;
  }
  try {
    const record = state.docId === null
      ? await api.createDocument(swml)
      : await api.putDocument(state.docId, swml);
    setState(markSaved(state, record.doc_id));
    if (finalize) {
      await api.finalizeDocument(record.doc_id);
      setState(markFinalized(state));
    }
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      setState(markFinalized({ ...state, banner: "document is finalized; edits disabled" }));
    } else if (err instanceof ApiError && err.status === 422) {
      setState({ ...state, banner: `rejected by service: ${err.message}` });
    } else {
      setState({ ...state, banner: "save failed; service unreachable" });
    }
  }
}

searchBox.addEventListener("input", () => void loadCatalog(searchBox.value));

void loadCatalog();
render();
