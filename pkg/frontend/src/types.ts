/** Wire types shared with the recognition service (field-for-field the
 * SWML attribute names). */

export interface SourceInfo {
  image: string;
  width: number;
  height: number;
}

export interface GlyphJson {
  code: string;
  x: number;
  y: number;
  w: number;
  h: number;
  confidence: number;
}

export interface SignBoxJson {
  id: number;
  x: number;
  y: number;
  w: number;
  h: number;
  glyphs: GlyphJson[];
}

export interface BBoxJson {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface SwmlJson {
  version?: string;
  source: SourceInfo;
  signboxes: SignBoxJson[];
  unrecognized: BBoxJson[];
}

export interface RecognizeResponse {
  swml: SwmlJson;
  glyphs: number;
  unrecognized: number;
  ms: number;
}

export interface CatalogEntry {
  code: string;
  name: string;
  category_name: string;
  primitive: string;
  nominal_size: number;
  orientation_steps: number;
}

export type DocumentStatus = "draft" | "finalized";

export interface DocumentRecord {
  doc_id: string;
  status: DocumentStatus;
  created: string;
  updated: string;
  swml: SwmlJson;
}

export interface StrokePayload {
  canvas: { w: number; h: number };
  strokes: number[][][];
}

export type Point = [number, number];
