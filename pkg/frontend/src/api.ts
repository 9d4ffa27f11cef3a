/** Thin fetch client for the transcription service. */

import type {
  CatalogEntry,
  DocumentRecord,
  RecognizeResponse,
  StrokePayload,
  SwmlJson,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function expectJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body: keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class TranscriberApi {
  constructor(readonly baseUrl: string = "") {}

  recognizeStrokes(payload: StrokePayload, name = "strokes"): Promise<RecognizeResponse> {
    return fetch(`${this.baseUrl}/recognize?name=${encodeURIComponent(name)}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    }).then((r) => expectJson<RecognizeResponse>(r));
  }

  searchCatalog(opts: { category?: number; q?: string } = {}): Promise<CatalogEntry[]> {
    const params = new URLSearchParams();
    if (opts.category !== undefined) params.set("category", String(opts.category));
    if (opts.q) params.set("q", opts.q);
    const query = params.toString();
    return fetch(`${this.baseUrl}/catalog${query ? `?${query}` : ""}`)
      .then((r) => expectJson<CatalogEntry[]>(r));
  }

  createDocument(swml: SwmlJson): Promise<DocumentRecord> {
    return fetch(`${this.baseUrl}/documents`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(swml),
    }).then((r) => expectJson<DocumentRecord>(r));
  }

  putDocument(docId: string, swml: SwmlJson): Promise<DocumentRecord> {
    return fetch(`${this.baseUrl}/documents/${docId}`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(swml),
    }).then((r) => expectJson<DocumentRecord>(r));
  }

  finalizeDocument(docId: string): Promise<DocumentRecord> {
    return fetch(`${this.baseUrl}/documents/${docId}/finalize`, { method: "POST" })
      .then((r) => expectJson<DocumentRecord>(r));
  }

  getDocument(docId: string): Promise<DocumentRecord> {
    return fetch(`${this.baseUrl}/documents/${docId}`)
      .then((r) => expectJson<DocumentRecord>(r));
  }
}
