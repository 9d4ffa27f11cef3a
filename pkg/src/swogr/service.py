"""HTTP facade for the transcriber UI.

Endpoints:
    POST /recognize                 strokes (application/json) or a page
                                    upload (image/png, image/x-portable-graymap)
    GET  /catalog?category=N&q=txt  symbol picker backend
    POST /documents                 create a draft from SWML-as-JSON
    GET  /documents/{id}            fetch a record
    PUT  /documents/{id}            replace draft content
    POST /documents/{id}/finalize   freeze and persist the document

Persistence is a directory of canonical SWML files plus an index file;
drafts live in memory and only finalized documents reach disk (written
via temp file + atomic rename). Document ids are 128-bit random tokens,
base32. There is no authentication: this is a deployment-local tool.
"""

from __future__ import annotations

import argparse
import base64
import json
import os
import secrets
import sys
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .catalog import SymbolCatalog, catalog_load, default_catalog
from .codes import CATEGORY_COUNT, format_code
from .engine import RecognizerConfig, StrokeSet, recognize_page, recognize_strokes
from .errors import EmptyInk, SchemaViolation
from .imageio import decode_gray
from .swml import SwmlDocument, document_from_json, document_to_json, swml_serialize

DEFAULT_MAX_DIM = 4096

_IMAGE_TYPES = ("image/png", "image/x-portable-graymap")


def _new_doc_id() -> str:
    return base64.b32encode(secrets.token_bytes(16)).decode("ascii").rstrip("=")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class DocumentRecord:
    doc_id: str
    doc: SwmlDocument
    status: str  # draft | finalized
    created: str
    updated: str

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "status": self.status,
            "created": self.created,
            "updated": self.updated,
            "swml": document_to_json(self.doc),
        }


class DocumentStore:
    """Draft records in memory; finalized documents as canonical SWML
    files in the store directory, tracked by an index file."""

    def __init__(self, directory: Path | None):
        self.directory = Path(directory) if directory else None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
        self._records: dict[str, DocumentRecord] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock_for(self, doc_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(doc_id, threading.Lock())

    def create(self, doc: SwmlDocument) -> DocumentRecord:
        doc_id = _new_doc_id()
        now = _now()
        record = DocumentRecord(doc_id, doc, "draft", now, now)
        with self._registry_lock:
            self._records[doc_id] = record
            self._locks[doc_id] = threading.Lock()
        return record

    def get(self, doc_id: str) -> DocumentRecord:
        record = self._records.get(doc_id)
        if record is None:
            raise KeyError(doc_id)
        return record

    def replace(self, doc_id: str, doc: SwmlDocument) -> DocumentRecord:
        with self._lock_for(doc_id):
            record = self.get(doc_id)
            if record.status == "finalized":
                raise PermissionError(doc_id)
            record.doc = doc
            record.updated = _now()
            return record

    def finalize(self, doc_id: str) -> DocumentRecord:
        with self._lock_for(doc_id):
            record = self.get(doc_id)
            if record.status == "finalized":
                raise PermissionError(doc_id)
            if self.directory is not None:
                self._write_atomic(self.directory / f"{doc_id}.swml",
                                   swml_serialize(record.doc))
            record.status = "finalized"
            record.updated = _now()
            if self.directory is not None:
                self._write_index()
            return record

    def _write_atomic(self, path: Path, data: bytes):
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".swogr-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def _write_index(self):
        index = {
            rec.doc_id: {"status": rec.status, "created": rec.created,
                         "updated": rec.updated,
                         "image": rec.doc.source.image}
            for rec in self._records.values() if rec.status == "finalized"
        }
        payload = json.dumps(index, indent=2, sort_keys=True).encode("utf-8")
        self._write_atomic(self.directory / "index.json", payload)


def create_app(catalog: SymbolCatalog | None = None,
               cfg: RecognizerConfig | None = None,
               store_dir=None,
               max_dim: int = DEFAULT_MAX_DIM) -> FastAPI:
    catalog = catalog or default_catalog()
    cfg = cfg or RecognizerConfig()
    store = DocumentStore(store_dir)
    app = FastAPI(title="swogr", version="0.1.0")
    app.state.store = store

    @app.post("/recognize")
    async def recognize(request: Request, name: str = "upload"):
        content_type = (request.headers.get("content-type") or "").split(";")[0].strip()
        body = await request.body()
        if content_type == "application/json":
            try:
                payload = json.loads(body)
                strokes = StrokeSet.from_wire(payload)
            except (ValueError, TypeError) as exc:
                raise HTTPException(400, f"malformed stroke body: {exc}")
            if strokes.canvas_w > max_dim or strokes.canvas_h > max_dim:
                raise HTTPException(413, f"canvas exceeds {max_dim}px")
            try:
                outcome = recognize_strokes(strokes, catalog, cfg)
            except EmptyInk as exc:
                raise HTTPException(422, str(exc))
        elif content_type in _IMAGE_TYPES:
            try:
                image = decode_gray(body)
            except Exception as exc:
                raise HTTPException(400, f"cannot decode image: {exc}")
            if image.width > max_dim or image.height > max_dim:
                raise HTTPException(413, f"image exceeds {max_dim}px")
            outcome = recognize_page(image, catalog, cfg)
        else:
            raise HTTPException(400, f"unsupported content type {content_type!r}")
        doc = outcome.to_document(name)
        return {
            "swml": document_to_json(doc),
            "glyphs": len(outcome.glyphs),
            "unrecognized": len(outcome.unrecognized),
            "ms": outcome.timing["total_ms"],
        }

    @app.get("/catalog")
    def catalog_search(category: str | None = None, q: str | None = None):
        cat = None
        if category is not None:
            try:
                cat = int(category)
            except ValueError:
                raise HTTPException(400, f"bad category {category!r}")
            if not 1 <= cat <= CATEGORY_COUNT:
                raise HTTPException(400, f"category {cat} outside 1..{CATEGORY_COUNT}")
        entries = catalog.search(category=cat, q=q)
        return [
            {
                "code": format_code(meta.code),
                "name": meta.name,
                "category_name": meta.category_name,
                "primitive": meta.template.primitive.value,
                "nominal_size": meta.template.nominal_size,
                "orientation_steps": meta.template.orientation_steps,
            }
            for meta in entries
        ]

    def _document_body(payload) -> SwmlDocument:
        try:
            return document_from_json(payload)
        except SchemaViolation as exc:
            raise HTTPException(422, str(exc))

    @app.post("/documents")
    async def create_document(request: Request):
        try:
            payload = json.loads(await request.body())
        except ValueError as exc:
            raise HTTPException(400, f"malformed JSON: {exc}")
        record = store.create(_document_body(payload))
        return record.to_json()

    @app.get("/documents/{doc_id}")
    def get_document(doc_id: str):
        try:
            return store.get(doc_id).to_json()
        except KeyError:
            raise HTTPException(404, f"unknown document {doc_id}")

    @app.put("/documents/{doc_id}")
    async def put_document(doc_id: str, request: Request):
        try:
            payload = json.loads(await request.body())
        except ValueError as exc:
            raise HTTPException(400, f"malformed JSON: {exc}")
        doc = _document_body(payload)
        try:
            return store.replace(doc_id, doc).to_json()
        except KeyError:
            raise HTTPException(404, f"unknown document {doc_id}")
        except PermissionError:
            raise HTTPException(409, f"document {doc_id} is finalized")

    @app.post("/documents/{doc_id}/finalize")
    def finalize_document(doc_id: str):
        try:
            return store.finalize(doc_id).to_json()
        except KeyError:
            raise HTTPException(404, f"unknown document {doc_id}")
        except PermissionError:
            raise HTTPException(409, f"document {doc_id} is finalized")

    @app.exception_handler(SchemaViolation)
    def schema_violation(request, exc):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    return app


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="swogr-serve", description="Run the swogr transcription service.")
    parser.add_argument("--port", type=int, default=8765)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--store", metavar="DIR", default="swogr-store",
                        help="directory for finalized documents")
    parser.add_argument("--config", metavar="FILE",
                        help="key = value recognizer config file")
    parser.add_argument("--catalog", metavar="FILE",
                        help="catalog file (default: packaged catalog)")
    parser.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    args = parser.parse_args(argv)

    catalog = (catalog_load(Path(args.catalog).read_bytes())
               if args.catalog else default_catalog())
    cfg = RecognizerConfig.from_file(args.config) if args.config else RecognizerConfig()
    app = create_app(catalog, cfg, store_dir=args.store, max_dim=args.max_dim)

    import uvicorn
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
